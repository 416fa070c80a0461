//! Finite fields `F_{q^m}` realized as `F_p[x]/(f)` for a primitive `f`, together
//! with the ramification budget and truncation caps shared by one computation.
//!
//! Elements are stored as integers whose base-`p` digits are the coefficients of
//! the residue polynomial, so the prime field is `0..p`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Fe = u32;

const MAX_ORDER_ODD: u32 = 2048;
const MAX_ORDER_EVEN: u32 = 1 << 16;

fn one() -> u32 {
    1
}

fn default_ram() -> u32 {
    6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default = "one")]
    pub m: u32,
    /// `M` in the ramification denominator `R = (q-1) q^M`.
    #[serde(default = "default_ram")]
    pub ram_exp: u32,
}

impl FieldParams {
    #[must_use]
    pub fn new(p: u32, e: u32, m: u32) -> Self {
        FieldParams { p, e, m, ram_exp: default_ram() }
    }

    #[must_use]
    pub fn q(&self) -> u64 {
        u64::from(self.p).pow(self.e)
    }
}

fn default_floor() -> i64 {
    40
}
fn default_tmax() -> u32 {
    12
}
fn default_dmax() -> u32 {
    8
}

/// Truncation caps: coefficient floor, total t-degree, enumeration degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    #[serde(default = "default_floor")]
    pub v_floor: i64,
    #[serde(default = "default_tmax")]
    pub t_max: u32,
    #[serde(default = "default_dmax")]
    pub d_max: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { v_floor: default_floor(), t_max: default_tmax(), d_max: default_dmax() }
    }
}

pub struct Context {
    params: FieldParams,
    precision: Precision,
    p: u32,
    q: u64,
    order: u32,
    r: i64,
    modulus: Vec<u32>,
    exp: Vec<Fe>,
    log: Vec<u32>,
    add_tab: Vec<u16>,
    neg_tab: Vec<Fe>,
    fq: Vec<Fe>,
    qpow: Vec<u64>,
    root_minus_one: Fe,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("params", &self.params)
            .field("precision", &self.precision)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn digits(mut v: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Powers of `x` modulo `x^n + c_{n-1}x^{n-1} + ... + c_0`, or `None` if `x` is not primitive.
fn primitive_powers(c: &[u32], p: u32, order: u32) -> Option<Vec<u32>> {
    let n = c.len();
    let mut cur = vec![0u32; n];
    cur[0] = 1;
    let mut out = Vec::with_capacity(order as usize - 1);
    for k in 0..order - 1 {
        let v = undigits(&cur, p);
        if k > 0 && v == 1 {
            return None;
        }
        out.push(v);
        // multiply by x
        let top = cur[n - 1];
        for i in (1..n).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..n {
                cur[i] = (cur[i] + (p - (top * c[i]) % p)) % p;
            }
        }
    }
    if undigits(&cur, p) == 1 {
        Some(out)
    } else {
        None
    }
}

impl Context {
    /// Builds the field, raising `m` until `F_{q^m}` contains a `(q-1)`-st root of `-1`.
    pub fn new(params: FieldParams, precision: Precision) -> Result<Arc<Context>> {
        if !is_prime(params.p) {
            return Err(Error::Config(format!("p = {} is not prime", params.p)));
        }
        if params.e == 0 || params.m == 0 {
            return Err(Error::Config("e and m must be positive".into()));
        }
        if precision.v_floor < 1 {
            return Err(Error::Config("v_floor must be positive".into()));
        }
        let mut m = params.m;
        loop {
            let ctx = Self::build(FieldParams { m, ..params }, precision)?;
            if let Some(ctx) = ctx {
                return Ok(Arc::new(ctx));
            }
            m += 1;
            if m > params.m + 4 {
                return Err(Error::Config("no (q-1)-st root of -1 found".into()));
            }
        }
    }

    fn build(params: FieldParams, precision: Precision) -> Result<Option<Context>> {
        let p = params.p;
        let q = params.q();
        let n = (params.e * params.m) as usize;
        let order_big = u64::from(p).checked_pow(n as u32).unwrap_or(u64::MAX);
        let cap = if p == 2 { MAX_ORDER_EVEN } else { MAX_ORDER_ODD };
        if order_big > u64::from(cap) {
            return Err(Error::Config(format!("field of order {order_big} is too large (cap {cap})")));
        }
        let order = order_big as u32;
        let qm = q.checked_pow(params.ram_exp).filter(|v| *v <= 1 << 40);
        let Some(qm) = qm else {
            return Err(Error::Config("ramification budget too large".into()));
        };
        let r = ((q - 1) * qm) as i64;

        let mut found = None;
        for idx in 0..p.pow(n as u32) {
            let c = digits(idx, p, n);
            if let Some(pows) = primitive_powers(&c, p, order) {
                found = Some((c, pows));
                break;
            }
        }
        let (modulus, pows) = found.ok_or_else(|| Error::Config("no primitive polynomial".into()))?;
        let mut exp = pows.clone();
        exp.extend_from_slice(&pows);
        let mut log = vec![0u32; order as usize];
        for (k, &v) in pows.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        let mut add_tab = Vec::new();
        let mut neg_tab = vec![0; order as usize];
        for a in 0..order {
            let da = digits(a, p, n);
            neg_tab[a as usize] = undigits(&da.iter().map(|x| (p - x) % p).collect::<Vec<_>>(), p);
        }
        if p != 2 {
            add_tab = vec![0u16; (order * order) as usize];
            for a in 0..order {
                let da = digits(a, p, n);
                for b in 0..order {
                    let db = digits(b, p, n);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add_tab[(a * order + b) as usize] = undigits(&s, p) as u16;
                }
            }
        }
        let qpow = (0..params.m)
            .map(|s| {
                let mut v = 1u64;
                for _ in 0..s {
                    v = v * q % u64::from(order - 1).max(1);
                }
                v
            })
            .collect();
        let mut ctx = Context {
            params,
            precision,
            p,
            q,
            order,
            r,
            modulus,
            exp,
            log,
            add_tab,
            neg_tab,
            fq: Vec::new(),
            qpow,
            root_minus_one: 1,
        };
        let mut fq: Vec<Fe> = (0..order).filter(|&a| ctx.frob(a, 1) == a).collect();
        fq.sort_unstable();
        debug_assert_eq!(fq.len() as u64, q);
        ctx.fq = fq;
        let minus_one = ctx.neg(1);
        match ctx.root(minus_one, q - 1) {
            Some(z) => {
                ctx.root_minus_one = z;
                Ok(Some(ctx))
            }
            None => Ok(None),
        }
    }

    /// Same field with different truncation caps.
    #[must_use]
    pub fn with_precision(&self, precision: Precision) -> Arc<Context> {
        Arc::new(Context {
            params: self.params,
            precision,
            p: self.p,
            q: self.q,
            order: self.order,
            r: self.r,
            modulus: self.modulus.clone(),
            exp: self.exp.clone(),
            log: self.log.clone(),
            add_tab: self.add_tab.clone(),
            neg_tab: self.neg_tab.clone(),
            fq: self.fq.clone(),
            qpow: self.qpow.clone(),
            root_minus_one: self.root_minus_one,
        })
    }

    #[must_use]
    pub fn params(&self) -> FieldParams {
        self.params
    }
    #[must_use]
    pub fn precision(&self) -> Precision {
        self.precision
    }
    #[must_use]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[must_use]
    pub fn q(&self) -> u64 {
        self.q
    }
    #[must_use]
    pub fn qi(&self) -> i64 {
        self.q as i64
    }
    /// Number of elements of the constant field `F_{q^m}`.
    #[must_use]
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Ramification denominator: all exponents live in `(1/R) Z`.
    #[must_use]
    pub fn r(&self) -> i64 {
        self.r
    }
    /// `v * R`, the numerator of an integral valuation.
    #[must_use]
    pub fn vnum(&self, v: i64) -> i64 {
        v * self.r
    }
    #[must_use]
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Elements of `F_q`, sorted by representation.
    #[must_use]
    pub fn fq(&self) -> &[Fe] {
        &self.fq
    }

    #[inline]
    #[must_use]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            a ^ b
        } else {
            Fe::from(self.add_tab[(a * self.order + b) as usize])
        }
    }
    #[inline]
    #[must_use]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            a
        } else {
            self.neg_tab[a as usize]
        }
    }
    #[inline]
    #[must_use]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    #[inline]
    #[must_use]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }
    /// Product of `a` with an element given by its discrete log.
    #[inline]
    #[must_use]
    pub fn mul_log(&self, a: Fe, lb: u32) -> Fe {
        if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + lb) as usize]
        }
    }
    #[inline]
    #[must_use]
    pub fn log_of(&self, a: Fe) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }
    #[must_use]
    pub fn from_log(&self, k: u64) -> Fe {
        self.exp[(k % u64::from(self.order - 1)) as usize]
    }
    #[must_use]
    pub fn generator(&self) -> Fe {
        self.from_log(1)
    }
    #[must_use]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            None
        } else {
            let l = self.log[a as usize];
            Some(self.exp[((self.order - 1 - l) % (self.order - 1)) as usize])
        }
    }
    #[must_use]
    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = u64::from(self.log[a as usize]);
        self.from_log(l * (k % u64::from(self.order - 1)))
    }
    /// `a^(q^n)` for any integer `n`; Frobenius has order `m`.
    #[must_use]
    pub fn frob(&self, a: Fe, n: i64) -> Fe {
        if a == 0 || self.order == 2 {
            return a;
        }
        let s = n.rem_euclid(i64::from(self.params.m)) as usize;
        let l = u64::from(self.log[a as usize]);
        self.from_log(l * self.qpow[s])
    }
    /// Prime-field element `k mod p`.
    #[must_use]
    pub fn from_int(&self, k: i64) -> Fe {
        k.rem_euclid(i64::from(self.p)) as Fe
    }
    #[must_use]
    pub fn minus_one(&self) -> Fe {
        self.neg(1)
    }
    /// `(-1)^k`.
    #[must_use]
    pub fn sign(&self, k: i64) -> Fe {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.minus_one()
        }
    }
    /// The fixed `(q-1)`-st root of `-1`: smallest discrete log.
    #[must_use]
    pub fn root_minus_one(&self) -> Fe {
        self.root_minus_one
    }
    /// Smallest-log solution of `x^k = c`, if any.
    #[must_use]
    pub fn root(&self, c: Fe, k: u64) -> Option<Fe> {
        if c == 0 {
            return Some(0);
        }
        let n = u64::from(self.order - 1);
        let target = u64::from(self.log[c as usize]);
        (0..n).find(|&l| (l * k) % n == target).map(|l| self.from_log(l))
    }
    #[must_use]
    pub fn in_fq(&self, a: Fe) -> bool {
        self.frob(a, 1) == a
    }
    #[must_use]
    pub fn in_prime_field(&self, a: Fe) -> bool {
        a < self.p
    }

    /// Canonical text for an element: an integer on the prime field, `g^k` otherwise.
    #[must_use]
    pub fn fmt_elem(&self, a: Fe) -> String {
        if self.in_prime_field(a) {
            a.to_string()
        } else {
            format!("g^{}", self.log[a as usize])
        }
    }

    /// Roots of a monic polynomial over `F_q` (coefficients low to high) in `F_{q^m}`, by log order.
    #[must_use]
    pub fn roots_of(&self, coeffs: &[Fe]) -> Vec<Fe> {
        let mut out: Vec<Fe> = (0..self.order).filter(|&x| self.eval_poly(coeffs, x) == 0).collect();
        out.sort_by_key(|&x| if x == 0 { 0 } else { 1 + self.log[x as usize] });
        out
    }

    #[must_use]
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, e: u32, m: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, e, m), Precision::default()).unwrap()
    }

    #[test]
    fn test_field_axioms_small() {
        for (p, e, m) in [(2, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 1), (5, 1, 1)] {
            let k = ctx(p, e, m);
            let n = k.order();
            for a in 0..n {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                for b in 0..n {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn test_m_auto_raised_for_odd_q() {
        let k = ctx(3, 1, 1);
        assert_eq!(k.params().m, 2);
        let z = k.root_minus_one();
        assert_eq!(k.pow(z, 2), k.minus_one());
    }

    #[test]
    fn test_frobenius_order_and_fixed_field() {
        let k = ctx(2, 1, 2);
        for a in 0..k.order() {
            assert_eq!(k.frob(k.frob(a, 1), -1), a);
            assert_eq!(k.frob(a, 2), a);
        }
        assert_eq!(k.fq(), &[0, 1]);
        let k = ctx(2, 2, 1);
        assert_eq!(k.fq().len(), 4);
    }

    #[test]
    fn test_ramification_denominator() {
        assert_eq!(ctx(2, 1, 1).r(), 64);
        assert_eq!(ctx(3, 1, 2).r(), 2 * 729);
    }

    #[test]
    fn test_roots_of_quadratic_in_f4() {
        let k = ctx(2, 1, 2);
        let roots = k.roots_of(&[1, 1, 1]);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(!k.in_fq(r));
        }
    }
}
