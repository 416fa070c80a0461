//! Invariants checked on random inputs, plus an independent power-sum oracle.

use std::sync::Arc;

use proptest::prelude::*;

use ffspecial::canon::{parse_series, parse_tate};
use ffspecial::power_sums::q_poly_interpolate;
use ffspecial::tate::{Mono, NormExp, TateElement};
use ffspecial::{Context, FieldParams, Precision, RamifiedSeries};

fn ctx(p: u32, m: u32) -> Arc<Context> {
    Context::new(FieldParams::new(p, 1, m), Precision::default()).unwrap()
}

/// Exponents as multiples of `R/den` for small denominators.
fn series_strategy(p: u32, m: u32) -> impl Strategy<Value = SeriesSpec> {
    let q = p.pow(m);
    (
        prop::collection::vec((-8i64..6, prop::sample::select(vec![1u32, 2, p]), 0..q), 0..6),
        prop::option::of(3i64..12),
    )
}

type SeriesSpec = (Vec<(i64, u32, u32)>, Option<i64>);
type TateSpec = Vec<(u16, u16, SeriesSpec)>;

fn build_series(k: &Arc<Context>, terms: &[(i64, u32, u32)], floor: Option<i64>) -> RamifiedSeries {
    let r = k.r();
    let terms = terms.iter().map(|&(a, den, c)| (a * r / i64::from(den), c as _)).collect();
    RamifiedSeries::from_terms(k, terms, floor.map(|f| f * r))
}

fn build_tate(k: &Arc<Context>, parts: &[(u16, u16, SeriesSpec)]) -> TateElement {
    let terms = parts
        .iter()
        .map(|(a, b, (s, _))| (Mono::var(0, *a).mul(&Mono::var(1, *b)), build_series(k, s, None)))
        .collect();
    TateElement::from_terms(k, terms, None, None)
}

fn tate_strategy(p: u32, m: u32) -> impl Strategy<Value = TateSpec> {
    prop::collection::vec((0u16..3, 0u16..3, series_strategy(p, m)), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_series_text_round_trip(
        (p, m, (terms, floor)) in (prop::sample::select(vec![2u32, 3]), 1u32..3)
            .prop_flat_map(|(p, m)| (Just(p), Just(m), series_strategy(p, m)))
    ) {
        let k = ctx(p, m);
        let x = build_series(&k, &terms, floor);
        let text = x.to_string();
        let back = parse_series(&k, &text).unwrap();
        prop_assert!(back.same(&x), "{text}");
    }

    #[test]
    fn prop_tate_text_round_trip(parts in tate_strategy(3, 1), floor in prop::option::of(2i64..9)) {
        let k = ctx(3, 1);
        let mut x = build_tate(&k, &parts);
        if let Some(f) = floor {
            x = x.truncate(f * k.r());
        }
        let text = x.to_string();
        prop_assert!(parse_tate(&k, &text).unwrap().same(&x), "{text}");
    }

    #[test]
    fn prop_twist_is_ring_homomorphism(a in tate_strategy(2, 2), b in tate_strategy(2, 2)) {
        let k = ctx(2, 2);
        let (x, y) = (build_tate(&k, &a), build_tate(&k, &b));
        let lhs = x.mul(&y).twist(1).unwrap();
        let rhs = x.twist(1).unwrap().mul(&y.twist(1).unwrap());
        prop_assert!(lhs.same(&rhs));
        let sum = x.add(&y).twist(1).unwrap();
        prop_assert!(sum.same(&x.twist(1).unwrap().add(&y.twist(1).unwrap())));
        // τ^{-1} undoes τ
        prop_assert!(x.twist(1).unwrap().twist(-1).unwrap().same(&x));
    }

    #[test]
    fn prop_gauss_norm_is_multiplicative(a in tate_strategy(3, 1), b in tate_strategy(3, 1)) {
        let k = ctx(3, 1);
        let (x, y) = (build_tate(&k, &a), build_tate(&k, &b));
        let n = match (x.norm(), y.norm()) {
            (NormExp::Exact(e), NormExp::Exact(f)) => NormExp::Exact(e + f),
            _ => NormExp::Zero,
        };
        prop_assert_eq!(x.mul(&y).norm(), n);
    }

    #[test]
    fn prop_truncation_is_sound(a in series_strategy(3, 1), b in series_strategy(3, 1), f in 1i64..6) {
        let k = ctx(3, 1);
        let w = f * k.r();
        let (x, y) = (build_series(&k, &a.0, None), build_series(&k, &b.0, None));
        // arithmetic on truncations agrees with the exact result above the floor
        prop_assert!(x.truncate(w).add(&y.truncate(w)).agrees(&x.add(&y), w));
        let lo = w + x.max_exp().unwrap_or(0).max(0) + y.max_exp().unwrap_or(0).max(0);
        prop_assert!(x.truncate(lo).mul(&y.truncate(lo)).agrees(&x.mul(&y), w));
    }
}

/// `Σ_{a monic, deg a = d} a^{-n}` as coefficients of `θ^{-k}`, `k < len`, over `F_p`,
/// from expanding `a^{-1} = θ^{-d}(1 + c_{d-1}θ^{-1} + … + c_0 θ^{-d})^{-1}` by hand.
fn power_sum_oracle(p: u64, n: u32, d: u32, len: usize) -> Vec<u64> {
    let mut total = vec![0u64; len];
    let count = p.pow(d);
    for idx in 0..count {
        // reversed polynomial 1 + c_{d-1} x + … + c_0 x^d in x = θ^{-1}
        let mut rev = vec![1u64];
        let mut v = idx;
        let mut low = Vec::new();
        for _ in 0..d {
            low.push(v % p);
            v /= p;
        }
        for i in (0..d as usize).rev() {
            rev.push(low[i]);
        }
        // inverse power series of rev
        let mut inv = vec![0u64; len];
        inv[0] = 1;
        for k in 1..len {
            let mut s = 0;
            for j in 1..rev.len().min(k + 1) {
                s = (s + rev[j] * inv[k - j]) % p;
            }
            inv[k] = (p - s) % p;
        }
        let mut pw = vec![0u64; len];
        pw[0] = 1;
        for _ in 0..n {
            let mut next = vec![0u64; len];
            for i in 0..len {
                for j in 0..len - i {
                    next[i + j] = (next[i + j] + pw[i] * inv[j]) % p;
                }
            }
            pw = next;
        }
        let shift = (d * n) as usize;
        for i in 0..len.saturating_sub(shift) {
            total[i + shift] = (total[i + shift] + pw[i]) % p;
        }
    }
    total
}

#[test]
fn power_sums_match_hand_expansion() {
    for p in [2u32, 3] {
        let k = ctx(p, 1);
        let floor = 30;
        let w = k.vnum(floor);
        for n in 1..=3 {
            let qp = q_poly_interpolate(&k, &[], n).unwrap();
            for d in 0..=3 {
                let oracle = power_sum_oracle(u64::from(p), n, d, floor as usize);
                let terms = oracle
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (-(i as i64) * k.r(), c as _))
                    .collect();
                let expect = TateElement::scalar(&RamifiedSeries::from_terms(&k, terms, Some(w)));
                let got = qp.power_sum(d, w).unwrap();
                assert!(got.agrees(&expect, w), "q={p} N={n} d={d}: {got} vs {expect}");
            }
        }
    }
}
