//! Power sums `S_d(U,N) = Σ_{a monic, deg a = d} ∏_{j∈U} a(t_j) / a^N` and the polynomial
//! `Q_{U,N}(t)` that produces all of them by twisting and evaluating at `t = θ`.
//!
//! `Q` may have denominators `t_j - θ^{q^{-k}}`. It is stored as `Q̃ = D·Q` with
//! `D = ∏_{j∈U} ∏_{k=1}^{m} (t_j - θ^{q^{-k}})`, so `Q̃` is an exact polynomial with
//! coefficients in `F_q[θ^{1/q^m}]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::apoly::{self, ell, ell_degree, gamma, r_of};
use crate::constants::{b_set, omega_big_twist_at_theta, omega_set, pi_tilde, theta_qpow};
use crate::error::{Error, Result};
use crate::field::{Context, Fe};
use crate::series::RamifiedSeries;
use crate::tate::{Mono, NormExp, TateElement};

/// `S_d(U,N)` by enumerating monic polynomials, known to `floor`.
pub fn power_sum_bruteforce(ctx: &Arc<Context>, u: &[usize], n: u32, d: u32, floor: i64) -> Result<TateElement> {
    let polys = apoly::monic(ctx, d)?;
    if d == 0 {
        return Ok(TateElement::one(ctx));
    }
    let r = ctx.r();
    let top = -(i64::from(n) * i64::from(d));
    let lo = -floor.div_euclid(r) - 1;
    if top <= lo {
        return Ok(TateElement::unknown(ctx, floor));
    }
    let len = (top - lo) as usize;
    let mut acc: BTreeMap<Mono, Vec<Fe>> = BTreeMap::new();
    for a in &polys {
        let an = apoly::to_series(ctx, a).pow(n);
        let inv = an.inv(floor)?;
        let mut dense = vec![0 as Fe; len];
        for &(e, c) in inv.terms() {
            dense[((top * r - e) / r) as usize] = c;
        }
        let mut monos: Vec<(Mono, Fe)> = vec![(Mono::one(), 1)];
        for &j in u {
            let mut next = Vec::new();
            for (m, c) in &monos {
                for (k, &ak) in a.iter().enumerate() {
                    if ak != 0 {
                        next.push((m.with(j, k as u16), ctx.mul(*c, ak)));
                    }
                }
            }
            monos = next;
        }
        for (m, c) in monos {
            let buf = acc.entry(m).or_insert_with(|| vec![0; len]);
            let lc = ctx.log_of(c);
            for (slot, &x) in buf.iter_mut().zip(&dense) {
                if x != 0 {
                    *slot = ctx.add(*slot, ctx.mul_log(x, lc));
                }
            }
        }
    }
    let terms = acc
        .into_iter()
        .map(|(m, buf)| {
            let t = buf.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| ((top - i as i64) * r, c)).collect();
            (m, RamifiedSeries::from_terms(ctx, t, Some(floor)))
        })
        .collect();
    Ok(TateElement::from_terms(ctx, terms, Some(floor), None))
}

/// `ℓ_d^N S_d(U,N)` as an exact element of `A[t_U]`.
pub fn scaled_power_sum_exact(ctx: &Arc<Context>, u: &[usize], n: u32, d: u32) -> Result<TateElement> {
    let r = ctx.r();
    let deg = i64::from(n) * ell_degree(ctx.qi(), d);
    let floor = (deg + 2) * r;
    let s = power_sum_bruteforce(ctx, u, n, d, floor)?;
    let prod = s.mul_scalar(&ell(ctx, d).pow(n));
    exact_polynomial(&prod)
}

/// Drops the floor of an element already known to be a polynomial in `θ`, after checking
/// that no negative-exponent term survives above the floor.
fn exact_polynomial(x: &TateElement) -> Result<TateElement> {
    let ctx = x.ctx();
    if let Some(f) = x.floor() {
        if f <= 0 {
            return Err(Error::PrecisionExhausted("not enough terms to certify a polynomial".into()));
        }
    }
    let mut terms = Vec::new();
    for (m, c) in x.terms() {
        if c.terms().iter().any(|t| t.0 < 0) {
            return Err(Error::PrecisionExhausted("negative θ-exponents in a polynomial value".into()));
        }
        terms.push((*m, RamifiedSeries::from_terms(ctx, c.terms().to_vec(), None)));
    }
    Ok(TateElement::from_terms(ctx, terms, None, None))
}

fn div_linears(x: &TateElement, factors: &[(usize, RamifiedSeries)]) -> Result<TateElement> {
    let mut out = x.clone();
    for (j, c) in factors {
        out = out.div_linear(*j, c)?;
    }
    Ok(out)
}

/// Linear factors `(t_j - θ^{q^k})` of `b_i(U)` for `i ≥ 0`.
fn b_factors(ctx: &Arc<Context>, u: &[usize], i: u32) -> Result<Vec<(usize, RamifiedSeries)>> {
    let mut out = Vec::new();
    for &j in u {
        for k in 0..i {
            out.push((j, theta_qpow(ctx, i64::from(k))?));
        }
    }
    Ok(out)
}

/// `Q_{U,N}` stored as `Q̃ / D`.
#[derive(Clone, Debug)]
pub struct QPolynomial {
    pub u: Vec<usize>,
    pub n: u32,
    pub r: u32,
    /// Depth `m` of the denominators `t_j - θ^{q^{-k}}`, `k = 1..m`.
    pub m: u32,
    pub qtilde: TateElement,
}

impl QPolynomial {
    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        self.qtilde.ctx()
    }

    /// `D = ∏_{j∈U}∏_{k=1}^m (t_j - θ^{q^{-k}})`.
    pub fn den(&self) -> Result<TateElement> {
        den_for(self.ctx(), &self.u, self.m)
    }

    /// `deg_t Q`.
    #[must_use]
    pub fn t_degree(&self) -> u16 {
        self.qtilde.degree_in(0)
    }

    /// The scalar part of the normalizer: `ℓ_{r-1}^{q^r-N}`, or `Γ_N` for empty `U`.
    #[must_use]
    pub fn norm_scalar(&self) -> RamifiedSeries {
        normalizer_scalar(self.ctx(), &self.u, self.n, self.r)
    }

    /// `log_q ‖Q‖` as a numerator over `R`, exact.
    #[must_use]
    pub fn norm_exp(&self) -> NormExp {
        match self.qtilde.norm() {
            NormExp::Exact(e) => NormExp::Exact(e - self.den_norm_num()),
            other => other,
        }
    }

    fn den_norm_num(&self) -> i64 {
        let ctx = self.ctx();
        let q = ctx.qi();
        (1..=self.m).map(|k| ctx.r() / q.pow(k)).sum::<i64>() * self.u.len() as i64
    }

    /// Bound `(Nq - |U|)/(q-1)` as a numerator over `R`.
    #[must_use]
    pub fn norm_bound_num(&self) -> i64 {
        let ctx = self.ctx();
        let q = ctx.qi();
        (i64::from(self.n) * q - self.u.len() as i64) * ctx.r() / (q - 1)
    }

    /// Whether `‖Q‖ < q^{(Nq-|U|)/(q-1)}` holds.
    #[must_use]
    pub fn norm_certificate(&self) -> bool {
        self.norm_exp().lt(self.norm_bound_num())
    }

    /// Whether `Q` lies in `A[t_U][t]`.
    #[must_use]
    pub fn in_a(&self) -> bool {
        self.m == 0 && self.qtilde.is_in_a()
    }

    /// `Q` itself as an element (denominators expanded as series known to `floor`).
    pub fn as_element(&self, floor: i64) -> Result<TateElement> {
        if self.m == 0 {
            return Ok(self.qtilde.clone());
        }
        let den = self.den()?;
        let top = self.qtilde.norm().upper().unwrap_or(0);
        let inv = den.inv_unit(floor + top.max(0) + self.ctx().r())?;
        Ok(self.qtilde.mul(&inv).truncate(floor))
    }

    /// Coefficients of `t^k` in `Q`, as elements known to `floor`.
    pub fn t_coeffs(&self, floor: i64) -> Result<Vec<TateElement>> {
        Ok(self.as_element(floor)?.t_coeffs())
    }

    /// `S_d(U,N)` from `Q`, known to `floor`.
    pub fn power_sum(&self, d: u32, floor: i64) -> Result<TateElement> {
        let ctx = self.ctx().clone();
        let th = RamifiedSeries::theta_pow(&ctx, 1);
        let tw = self.qtilde.twist(i64::from(d))?.specialize(0, &th, None)?;
        let x = if d >= self.m {
            tw.mul(&b_set(&ctx, i64::from(d - self.m), &self.u, 0)?)
        } else {
            let mut f = Vec::new();
            for &j in &self.u {
                for k in d + 1..=self.m {
                    f.push((j, theta_qpow(&ctx, i64::from(d) - i64::from(k))?));
                }
            }
            div_linears(&tw, &f)?
        };
        let x = if self.u.is_empty() { x } else { div_linears(&x, &b_factors(&ctx, &self.u, self.r)?)? };
        let s = ell(&ctx, d).pow(self.n).mul(&self.norm_scalar());
        x.div_scalar(&s, floor)
    }

    /// Both sides of `ℓ_{r-1}^{q^r-N} b_r(U) ω_U S_d / π̃^N = (ω_U Q Ω^N)^{(d)}|_{t=θ}`
    /// (with `Γ_N` in place of the first two factors for empty `U`), known to `floor`.
    pub fn normalizer_identity(&self, d: u32, floor: i64) -> Result<(TateElement, TateElement)> {
        let ctx = self.ctx().clone();
        let r = ctx.r();
        let n = self.n;
        let wf = floor + r * (i64::from(n) * 2 + self.u.len() as i64 * 2 + 4);
        let om_u = omega_set(&ctx, &self.u, wf + r * (1 << d.min(20)))?;
        let s = self.power_sum(d, wf)?;
        let pi = pi_tilde(&ctx, wf)?;
        let mut lhs = s.mul(&om_u).mul_scalar(&self.norm_scalar());
        if !self.u.is_empty() {
            lhs = lhs.mul(&b_set(&ctx, i64::from(self.r), &self.u, 0)?);
        }
        let lhs = lhs.div_scalar(&pi.pow(n), wf)?.truncate(floor);
        let th = RamifiedSeries::theta_pow(&ctx, 1);
        let qd = self.qtilde.twist(i64::from(d))?.specialize(0, &th, None)?;
        let den_d = self.den()?.twist(i64::from(d))?;
        let qd = if self.m == 0 { qd } else { qd.mul(&den_d.inv_unit(wf + r * 4 * (1 << d.min(20)))?) };
        let om_d = om_u.twist(i64::from(d))?;
        let big = omega_big_twist_at_theta(&ctx, d, wf)?.pow(n);
        let rhs = om_d.mul(&qd).mul_scalar(&big).truncate(floor);
        Ok((lhs, rhs))
    }
}

fn den_for(ctx: &Arc<Context>, u: &[usize], m: u32) -> Result<TateElement> {
    let mut out = TateElement::one(ctx);
    for &j in u {
        for k in 1..=m {
            out = out.mul(&TateElement::linear(ctx, j, &theta_qpow(ctx, -i64::from(k))?));
        }
    }
    Ok(out)
}

fn normalizer_scalar(ctx: &Arc<Context>, u: &[usize], n: u32, r: u32) -> RamifiedSeries {
    if u.is_empty() {
        gamma(ctx, u64::from(n))
    } else {
        ell(ctx, r - 1).pow((ctx.q().pow(r) - u64::from(n)) as u32)
    }
}

/// Twisting degree `r` used in the normalizer: `max(1, ⌈log_q N⌉)`.
#[must_use]
pub fn r_for(q: u64, n: u32) -> u32 {
    r_of(q, u64::from(n))
}

/// Largest denominator depth allowed by the `z`-degree bound `(s-1)/(q-1)`, `s = q^r - N + |U|`.
#[must_use]
pub fn depth_bound(q: u64, u_len: usize, n: u32) -> u32 {
    if u_len == 0 {
        return 0;
    }
    let r = r_for(q, n);
    let s = q.pow(r) - u64::from(n) + u_len as u64;
    (s.saturating_sub(1) / (q - 1)) as u32
}

/// Reads `Q̃` off the exact sample `τ^d(Q̃)(θ)` when `q^{d-m} > deg_t Q̃`.
fn decode(sample: &TateElement, m: u32, d: u32) -> Option<TateElement> {
    let ctx = sample.ctx();
    let r = ctx.r();
    let qd = ctx.qi().pow(d - m);
    let qm = ctx.qi().pow(m);
    let mut terms = Vec::new();
    for (mono, c) in sample.terms() {
        for &(e, x) in c.terms() {
            if e % r != 0 || !ctx.in_fq(x) {
                return None;
            }
            let nexp = e / r;
            let (ee, k) = (nexp / qd, nexp % qd);
            terms.push((mono.with(0, k as u16), RamifiedSeries::monomial(ctx, x, ee * r / qm)));
        }
    }
    Some(TateElement::from_terms(ctx, terms, None, None))
}

struct BruteCache<'a> {
    ctx: &'a Arc<Context>,
    u: &'a [usize],
    n: u32,
    floor: i64,
    approx: BTreeMap<u32, TateElement>,
    exact: BTreeMap<u32, TateElement>,
}

impl BruteCache<'_> {
    fn approx(&mut self, d: u32) -> Result<TateElement> {
        if let Some(v) = self.approx.get(&d) {
            return Ok(v.clone());
        }
        let v = power_sum_bruteforce(self.ctx, self.u, self.n, d, self.floor)?;
        self.approx.insert(d, v.clone());
        Ok(v)
    }
    fn exact(&mut self, d: u32) -> Result<TateElement> {
        if let Some(v) = self.exact.get(&d) {
            return Ok(v.clone());
        }
        let v = scaled_power_sum_exact(self.ctx, self.u, self.n, d)?;
        self.exact.insert(d, v.clone());
        Ok(v)
    }
}

/// Reconstructs `Q_{U,N}` from exact power-sum samples: `τ^d(Q̃)(θ)` is recovered from
/// `S_d` and decoded digit-wise in base `q^{d-m}`; each candidate is validated against
/// enumerated power sums at every degree up to two beyond its sample.
pub fn q_poly_interpolate(ctx: &Arc<Context>, u: &[usize], n: u32) -> Result<QPolynomial> {
    if n == 0 {
        return Err(Error::Rejected("N must be positive".into()));
    }
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    let q = ctx.q();
    let r = r_for(q, n);
    let mmax = depth_bound(q, u.len(), n);
    if mmax > ctx.params().ram_exp {
        return Err(Error::RamificationBudget { num: 1, den: ctx.r(), shift: mmax });
    }
    let floor = ctx.vnum(ctx.precision().v_floor);
    let dcap = ctx.precision().d_max;
    let mut cache = BruteCache { ctx, u: &u, n, floor, approx: BTreeMap::new(), exact: BTreeMap::new() };
    let norm_s = normalizer_scalar(ctx, &u, n, r);
    let b_r = b_set(ctx, i64::from(r), &u, 0)?;
    for d in 1..=dcap.saturating_sub(2) {
        for m in 0..=mmax.min(d - 1) {
            let t = cache.exact(d)?;
            let mut w = t.mul_scalar(&norm_s);
            if !u.is_empty() {
                w = w.mul(&b_r);
            }
            let Ok(w) = div_linears(&w, &b_factors(ctx, &u, d - m)?) else {
                continue;
            };
            let Some(qt) = decode(&w, m, d) else {
                continue;
            };
            let cand = QPolynomial { u: u.clone(), n, r, m, qtilde: qt };
            let mut ok = true;
            for dv in 0..=d + 2 {
                let Ok(via) = cand.power_sum(dv, floor) else {
                    ok = false;
                    break;
                };
                let bf = cache.approx(dv)?;
                if !via.dist(&bf).lt(-floor + 1) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(cand);
            }
        }
    }
    Err(Error::InterpolationFailed(format!("no consistent Q for U = {u:?}, N = {n} below degree cap {dcap}")))
}

/// `Q_{U,N}` through the `exp_z(L(1,s,z))` construction with `s = q^r - N + |U|`.
pub fn q_poly_constructive(ctx: &Arc<Context>, u: &[usize], n: u32) -> Result<QPolynomial> {
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.is_empty() {
        return Err(Error::ConstructiveUnsupported("U is empty".into()));
    }
    let q = ctx.q();
    let r = r_for(q, n);
    let s = (q.pow(r) - u64::from(n)) as usize + u.len();
    if u.len() + (s - u.len()) >= crate::tate::NVARS {
        return Err(Error::ConstructiveUnsupported(format!("s = {s} needs too many auxiliary variables")));
    }
    let mbound = ((s as u64 - 1) / (q - 1)) as u32;
    if mbound > ctx.params().ram_exp {
        return Err(Error::RamificationBudget { num: 1, den: ctx.r(), shift: mbound });
    }
    // variables: U first, then fresh slots for t_{n+1..s}
    let used: Vec<usize> = u.clone();
    let extra: Vec<usize> = (1..crate::tate::NVARS).filter(|j| !used.contains(j)).take(s - u.len()).collect();
    let all: Vec<usize> = used.iter().chain(extra.iter()).copied().collect();
    // P_d = ℓ_d S_d(all, 1), exact
    let mut p = Vec::new();
    for d in 0..=mbound {
        p.push(scaled_power_sum_exact(ctx, &all, 1, d)?);
    }
    // σ_i = Σ_{j≤i} b_j(all)/D_j τ^j(P_{i-j}/ℓ_{i-j}); exact polynomial
    let mut sigma = Vec::new();
    let mut mz = 0;
    for i in 0..=mbound {
        let mut num = TateElement::zero(ctx);
        // common denominator L = ∏_j D_j τ^j(ℓ_{i-j}) is avoided by a deep series evaluation
        let mut deg = 0i64;
        for j in 0..=i {
            let dj = apoly::dfact(ctx, j);
            let lj = ell(ctx, i - j).twist(i64::from(j))?;
            deg = deg.max((dj.max_exp().unwrap() + lj.max_exp().unwrap()) / ctx.r());
        }
        let fl = ctx.r() * (deg * 2 + 8);
        for j in 0..=i {
            let bj = b_set(ctx, i64::from(j), &all, 0)?;
            let dj = apoly::dfact(ctx, j);
            let lj = ell(ctx, i - j).twist(i64::from(j))?;
            let term = bj.mul(&p[(i - j) as usize].twist(i64::from(j))?).div_scalar(&dj.mul(&lj), fl)?;
            num = num.add(&term);
        }
        let exact = exact_polynomial(&num)?;
        if !exact.is_zero_known() {
            mz = i;
        }
        sigma.push(exact);
    }
    let m = mz;
    // f: b_r(U) ∏_{extra} τ(b_{r-1}(t_k)) τ^r(σ_i); g_{i,k}: extra variables merged into t
    let mut pre = b_set(ctx, i64::from(r), &u, 0)?;
    for &k in &extra {
        pre = pre.mul(&b_set(ctx, i64::from(r) - 1, &[k], 0)?.twist(1)?);
    }
    let mut qt = TateElement::zero(ctx);
    let th = |k: i64| theta_qpow(ctx, k);
    for i in 0..=m {
        let mut f = pre.mul(&sigma[i as usize].twist(i64::from(r))?);
        // merge the extra variables into a scratch slot, then move it to t
        for &k in &extra {
            f = f.rename(k, 0);
        }
        let g = f.twist(-i64::from(i))?;
        let mut factor = TateElement::one(ctx);
        for &j in &u {
            for kk in i + 1..=m {
                factor = factor.mul(&TateElement::linear(ctx, j, &th(-i64::from(kk))?));
            }
        }
        for kk in 0..i {
            factor = factor.mul(&TateElement::linear(ctx, 0, &th(-i64::from(kk))?).pow(n));
        }
        qt = qt.add(&factor.mul(&g));
    }
    Ok(QPolynomial { u, n, r, m, qtilde: qt })
}

/// Whether two `Q`s agree exactly (cross-multiplying the denominators).
pub fn same_q(a: &QPolynomial, b: &QPolynomial) -> Result<bool> {
    Ok(a.qtilde.mul(&b.den()?).same(&b.qtilde.mul(&a.den()?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx(p: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_small_power_sums() {
        let k = ctx(2);
        let w = k.vnum(30);
        assert_eq!(power_sum_bruteforce(&k, &[], 1, 0, w).unwrap(), TateElement::one(&k));
        // S_1(∅,1) = 1/(θ^2+θ)
        let s = power_sum_bruteforce(&k, &[], 1, 1, w).unwrap();
        let expect = RamifiedSeries::one(&k).div(&RamifiedSeries::from_poly(&k, &[0, 1, 1]), w).unwrap();
        assert_eq!(s.constant_term(), expect);
        // S_1({1},1) = (t_1 + θ)/(θ^2+θ)
        let s = power_sum_bruteforce(&k, &[1], 1, 1, w).unwrap();
        let num = TateElement::linear(&k, 1, &RamifiedSeries::theta_pow(&k, 1));
        let expect = num.div_scalar(&RamifiedSeries::from_poly(&k, &[0, 1, 1]), w).unwrap();
        assert!(s.dist(&expect).lt(-w + 1));
    }

    #[test]
    fn test_q_single_variable_n1() {
        for p in [2, 3] {
            let k = ctx(p);
            let qp = q_poly_interpolate(&k, &[1], 1).unwrap();
            assert_eq!(qp.m, 0, "q = {p}: {}", qp.qtilde);
            let expect = TateElement::var(&k, 1).sub(&TateElement::var(&k, 0));
            assert_eq!(qp.qtilde, expect);
            if p == 3 {
                assert_eq!(qp.qtilde.to_string(), "t_1 - t");
            }
        }
    }

    #[test]
    fn test_q_empty_n1_is_one() {
        let k = ctx(2);
        let qp = q_poly_interpolate(&k, &[], 1).unwrap();
        assert_eq!(qp.qtilde, TateElement::one(&k));
    }

    #[test]
    fn test_constructive_matches_interpolation() {
        let k = ctx(2);
        for n in [1, 2] {
            let a = q_poly_interpolate(&k, &[1], n).unwrap();
            let b = q_poly_constructive(&k, &[1], n).unwrap();
            assert!(same_q(&a, &b).unwrap(), "N = {n}: {} vs {}", a.qtilde, b.qtilde);
        }
    }
}
