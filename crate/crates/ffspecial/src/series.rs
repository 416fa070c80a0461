//! Truncated Laurent series in `θ^{-1/R}` over `F_{q^m}` with an explicit floor.
//!
//! Exponents are stored as numerators over the context denominator `R`. A floor
//! `f` means every term `θ^{e/R}` with `-e/R >= f/R` is unknown; `None` marks an
//! exact (finite) Laurent polynomial in `θ^{1/R}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Context, Fe};

#[derive(Clone)]
pub struct RamifiedSeries {
    ctx: Arc<Context>,
    terms: Vec<(i64, Fe)>,
    floor: Option<i64>,
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn min_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Reduced fraction `num/den` with positive denominator.
#[must_use]
pub fn reduce(num: i64, den: i64) -> (i64, i64) {
    let g = gcd(num, den).max(1);
    let (n, d) = (num / g, den / g);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}

pub(crate) fn fmt_theta_exp(num: i64, den: i64) -> String {
    let (a, b) = reduce(num, den);
    if b == 1 {
        if a == 1 {
            "theta".to_string()
        } else {
            format!("theta^{a}")
        }
    } else {
        format!("theta^({a}/{b})")
    }
}

impl RamifiedSeries {
    /// Normalizes arbitrary terms: sorts, merges, drops zeros and terms at or below the floor.
    #[must_use]
    pub fn from_terms(ctx: &Arc<Context>, mut terms: Vec<(i64, Fe)>, floor: Option<i64>) -> Self {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(i64, Fe)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if let Some(f) = floor {
                if e <= -f {
                    continue;
                }
            }
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = ctx.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        RamifiedSeries { ctx: ctx.clone(), terms: out, floor }
    }

    fn raw(ctx: &Arc<Context>, terms: Vec<(i64, Fe)>, floor: Option<i64>) -> Self {
        RamifiedSeries { ctx: ctx.clone(), terms, floor }
    }

    #[must_use]
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Self::raw(ctx, Vec::new(), None)
    }
    #[must_use]
    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::constant(ctx, 1)
    }
    #[must_use]
    pub fn constant(ctx: &Arc<Context>, c: Fe) -> Self {
        Self::monomial(ctx, c, 0)
    }
    /// `c θ^{num/R}`.
    #[must_use]
    pub fn monomial(ctx: &Arc<Context>, c: Fe, num: i64) -> Self {
        if c == 0 {
            Self::zero(ctx)
        } else {
            Self::raw(ctx, vec![(num, c)], None)
        }
    }
    /// `θ^k` for integral `k`.
    #[must_use]
    pub fn theta_pow(ctx: &Arc<Context>, k: i64) -> Self {
        Self::monomial(ctx, 1, k * ctx.r())
    }
    /// `O(θ^{-floor/R})`.
    #[must_use]
    pub fn unknown(ctx: &Arc<Context>, floor: i64) -> Self {
        Self::raw(ctx, Vec::new(), Some(floor))
    }
    /// Exact polynomial in `θ` from coefficients listed low to high.
    #[must_use]
    pub fn from_poly(ctx: &Arc<Context>, coeffs: &[Fe]) -> Self {
        let r = ctx.r();
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as i64 * r, c))
            .collect();
        Self::raw(ctx, terms, None)
    }

    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }
    #[must_use]
    pub fn terms(&self) -> &[(i64, Fe)] {
        &self.terms
    }
    #[must_use]
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }
    #[must_use]
    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }
    #[must_use]
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.floor.is_none()
    }
    /// True when no term is known (exact zero or pure `O(..)`).
    #[must_use]
    pub fn is_zero_known(&self) -> bool {
        self.terms.is_empty()
    }
    #[must_use]
    pub fn leading(&self) -> Option<(i64, Fe)> {
        self.terms.first().copied()
    }
    #[must_use]
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }
    #[must_use]
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }
    /// Lower bound for the valuation (numerator); `None` only for exact zero.
    #[must_use]
    pub fn ord_lb(&self) -> Option<i64> {
        match (self.terms.first(), self.floor) {
            (Some(t), _) => Some(-t.0),
            (None, f) => f,
        }
    }
    /// Upper bound for `log_q` of the norm (numerator): exact when a term is known.
    #[must_use]
    pub fn norm_bound(&self) -> Option<i64> {
        self.ord_lb().map(|o| -o)
    }
    #[must_use]
    pub fn coeff(&self, num: i64) -> Fe {
        self.terms.iter().find(|t| t.0 == num).map_or(0, |t| t.1)
    }
    /// Whether every exponent is an integer and every coefficient lies in `F_q`.
    #[must_use]
    pub fn is_in_a(&self) -> bool {
        self.is_exact()
            && self.terms.iter().all(|&(e, c)| e >= 0 && e % self.ctx.r() == 0 && self.ctx.in_fq(c))
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|&(e, c)| (e, self.ctx.neg(c))).collect();
        Self::raw(&self.ctx, terms, self.floor)
    }

    #[must_use]
    pub fn scale(&self, c: Fe) -> Self {
        if c == 0 {
            return Self::zero(&self.ctx);
        }
        let l = self.ctx.log_of(c);
        let terms = self.terms.iter().map(|&(e, x)| (e, self.ctx.mul_log(x, l))).collect();
        Self::raw(&self.ctx, terms, self.floor)
    }

    /// Multiplication by `θ^{num/R}`.
    #[must_use]
    pub fn shift(&self, num: i64) -> Self {
        let terms = self.terms.iter().map(|&(e, c)| (e + num, c)).collect();
        Self::raw(&self.ctx, terms, self.floor.map(|f| f - num))
    }

    /// Lowers the floor to at most `floor`, discarding terms that fall below it.
    #[must_use]
    pub fn truncate(&self, floor: i64) -> Self {
        match self.floor {
            Some(f) if f <= floor => self.clone(),
            _ => {
                let terms = self.terms.iter().copied().filter(|t| t.0 > -floor).collect();
                Self::raw(&self.ctx, terms, Some(floor))
            }
        }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let ctx = &self.ctx;
        let floor = min_floor(self.floor, other.floor);
        let lo = floor.map_or(i64::MIN, |f| -f);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let nb = |c: Fe| if negate { ctx.neg(c) } else { c };
        while i < a.len() || j < b.len() {
            let (e, c) = if j >= b.len() || (i < a.len() && a[i].0 > b[j].0) {
                i += 1;
                a[i - 1]
            } else if i >= a.len() || b[j].0 > a[i].0 {
                j += 1;
                (b[j - 1].0, nb(b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, ctx.add(a[i - 1].1, nb(b[j - 1].1)))
            };
            if e <= lo {
                break;
            }
            if c != 0 {
                out.push((e, c));
            }
        }
        Self::raw(ctx, out, floor)
    }

    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }
    #[must_use]
    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn grid(&self) -> i64 {
        let top = self.terms.first().map_or(0, |t| t.0);
        self.terms.iter().fold(0, |g, t| gcd(g, top - t.0))
    }

    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        let ctx = &self.ctx;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(ctx);
        }
        let ox = self.ord_lb().unwrap_or(0);
        let oy = other.ord_lb().unwrap_or(0);
        let floor = min_floor(self.floor.map(|f| f + oy), other.floor.map(|f| f + ox));
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self::raw(ctx, Vec::new(), floor);
        }
        let top = self.terms[0].0 + other.terms[0].0;
        let lo = match floor {
            Some(f) => -f,
            None => self.terms.last().unwrap().0 + other.terms.last().unwrap().0 - 1,
        };
        if top <= lo {
            return Self::raw(ctx, Vec::new(), floor);
        }
        let (a, b) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let blogs: Vec<(i64, u32)> = b.terms.iter().map(|&(e, c)| (e, ctx.log_of(c))).collect();
        let bmax = b.terms[0].0;
        let mut g = gcd(a.grid(), b.grid());
        if g == 0 {
            g = 1;
        }
        let count = ((top - lo + g - 1) / g) as usize;
        let pairs = a.terms.len() * b.terms.len();
        if count <= 8 * pairs + 64 {
            let mut buf = vec![0 as Fe; count];
            for &(ea, ca) in &a.terms {
                if ea + bmax <= lo {
                    break;
                }
                for &(eb, lb) in &blogs {
                    let e = ea + eb;
                    if e <= lo {
                        break;
                    }
                    let idx = ((top - e) / g) as usize;
                    buf[idx] = ctx.add(buf[idx], ctx.mul_log(ca, lb));
                }
            }
            let terms = buf
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (top - k as i64 * g, c))
                .collect();
            Self::raw(ctx, terms, floor)
        } else {
            let mut acc = Vec::with_capacity(pairs);
            for &(ea, ca) in &a.terms {
                if ea + bmax <= lo {
                    break;
                }
                for &(eb, lb) in &blogs {
                    let e = ea + eb;
                    if e <= lo {
                        break;
                    }
                    acc.push((e, ctx.mul_log(ca, lb)));
                }
            }
            Self::from_terms(ctx, acc, floor)
        }
    }

    #[must_use]
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Inverse known at least down to `floor` (or exactly, for a monomial).
    pub fn inv(&self, floor: i64) -> Result<Self> {
        let ctx = &self.ctx;
        let Some((e0, c0)) = self.leading() else {
            return Err(Error::PrecisionExhausted("inverting a series indistinguishable from 0".into()));
        };
        let c0inv = ctx.inv(c0).expect("nonzero leading coefficient");
        if self.terms.len() == 1 && self.floor.is_none() {
            return Ok(Self::raw(ctx, vec![(-e0, c0inv)], None));
        }
        let mut f = floor;
        if let Some(fx) = self.floor {
            f = f.min(fx + 2 * e0);
        }
        let g = self.grid();
        if g == 0 {
            // single known term, inexact
            let terms = if -e0 > -f { vec![(-e0, c0inv)] } else { Vec::new() };
            return Ok(Self::raw(ctx, terms, Some(f)));
        }
        let span = f - e0;
        let count = if span > 0 { ((span + g - 1) / g) as usize } else { 0 };
        let l0 = ctx.log_of(c0inv);
        let tail: Vec<(usize, u32)> = self.terms[1..]
            .iter()
            .map(|&(e, c)| (((e0 - e) / g) as usize, ctx.log_of(ctx.mul_log(c, l0))))
            .collect();
        let mut z = vec![0 as Fe; count];
        if count > 0 {
            z[0] = 1;
        }
        for n in 1..count {
            let mut acc: Fe = 0;
            for &(k, la) in &tail {
                if k > n {
                    break;
                }
                acc = ctx.add(acc, ctx.mul_log(z[n - k], la));
            }
            z[n] = ctx.neg(acc);
        }
        let terms = z
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(j, c)| (-e0 - j as i64 * g, ctx.mul_log(c, l0)))
            .collect();
        Ok(Self::raw(ctx, terms, Some(f)))
    }

    /// `self / d`, with `d^{-1}` computed deep enough for the quotient to be known down to `floor`.
    pub fn div(&self, d: &Self, floor: i64) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let extra = self.max_exp().or_else(|| self.floor.map(|f| -f)).unwrap_or(0);
        let dinv = d.inv(floor + extra.max(0) + 1)?;
        Ok(self.mul(&dinv).truncate(floor))
    }

    /// Frobenius twist `τ^n`: exponents scale by `q^n`, coefficients by the `q^n`-power map.
    pub fn twist(&self, n: i64) -> Result<Self> {
        let ctx = &self.ctx;
        if n == 0 {
            return Ok(self.clone());
        }
        let q = ctx.qi();
        let shift = n.unsigned_abs() as u32;
        let k = q.checked_pow(shift).ok_or_else(|| Error::PrecisionExhausted("twist exponent overflow".into()))?;
        if n > 0 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for &(e, c) in &self.terms {
                let e2 = e.checked_mul(k).ok_or_else(|| Error::PrecisionExhausted("twist exponent overflow".into()))?;
                terms.push((e2, ctx.frob(c, n)));
            }
            let floor = self.floor.map(|f| f.saturating_mul(k).min(1 << 52));
            Ok(Self::raw(ctx, terms, floor))
        } else {
            let mut terms = Vec::with_capacity(self.terms.len());
            for &(e, c) in &self.terms {
                if e % k != 0 {
                    return Err(Error::RamificationBudget { num: e, den: ctx.r(), shift });
                }
                terms.push((e / k, ctx.frob(c, n)));
            }
            let floor = self.floor.map(|f| f.div_euclid(k));
            Ok(Self::from_terms(ctx, terms, floor))
        }
    }

    /// Whether `self` and `other` agree on every term above valuation `floor` and both are known that far.
    #[must_use]
    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        let d = self.sub(other);
        d.floor.is_none_or(|f| f >= floor) && d.terms.iter().all(|t| t.0 <= -floor)
    }

    /// Exact equality of representation (terms and floor).
    #[must_use]
    pub fn same(&self, other: &Self) -> bool {
        self.floor == other.floor && self.terms == other.terms
    }

    fn fmt_coeff(&self, c: Fe) -> (bool, String) {
        let ctx = &self.ctx;
        if ctx.in_prime_field(c) && ctx.p() > 2 && c > ctx.p() / 2 {
            (true, (ctx.p() - c).to_string())
        } else {
            (false, ctx.fmt_elem(c))
        }
    }

    /// Canonical term list: `(negative, text)` in decreasing exponent order.
    pub(crate) fn fmt_terms(&self) -> Vec<(bool, String)> {
        let r = self.ctx.r();
        let mut out = Vec::new();
        for &(e, c) in &self.terms {
            let (neg, ct) = self.fmt_coeff(c);
            let s = if e == 0 {
                ct
            } else if ct == "1" {
                fmt_theta_exp(e, r)
            } else {
                format!("{ct}*{}", fmt_theta_exp(e, r))
            };
            out.push((neg, s));
        }
        if let Some(f) = self.floor {
            let (a, b) = reduce(-f, r);
            let inner = if b == 1 { format!("theta^{a}") } else { format!("theta^({a}/{b})") };
            out.push((false, format!("O({inner})")));
        }
        out
    }

    /// Number of terms (without the floor marker).
    #[must_use]
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub(crate) fn join_terms(parts: &[(bool, String)]) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, t)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                s.push('-');
            }
        } else {
            s.push_str(if *neg { " - " } else { " + " });
        }
        s.push_str(t);
    }
    s
}

impl fmt::Display for RamifiedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_terms(&self.fmt_terms()))
    }
}

impl fmt::Debug for RamifiedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RamifiedSeries({self})")
    }
}

impl PartialEq for RamifiedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

/// Compares two exponent numerators against a rational bound `num/den` (in units of the context `R`).
#[must_use]
pub fn cmp_frac(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Ordering {
    (i128::from(a_num) * i128::from(b_den)).cmp(&(i128::from(b_num) * i128::from(a_den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx2() -> Arc<Context> {
        Context::new(FieldParams::new(2, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_inverse_of_theta_squared_plus_theta() {
        let k = ctx2();
        let x = RamifiedSeries::from_poly(&k, &[0, 1, 1]);
        let z = x.inv(k.vnum(40)).unwrap();
        // θ^{-2} + θ^{-3} + ...
        for (j, &(e, c)) in z.terms().iter().enumerate() {
            assert_eq!(e, -(2 + j as i64) * k.r());
            assert_eq!(c, 1);
        }
        let one = x.mul(&z);
        assert!(one.agrees(&RamifiedSeries::one(&k), k.vnum(38)));
    }

    #[test]
    fn test_twist_examples() {
        let k = ctx2();
        let x = RamifiedSeries::from_poly(&k, &[1, 1]);
        assert_eq!(x.twist(1).unwrap(), RamifiedSeries::from_poly(&k, &[1, 0, 1]));
        let th = RamifiedSeries::theta_pow(&k, 1);
        let half = th.twist(-1).unwrap();
        assert_eq!(half.to_string(), "theta^(1/2)");
        assert_eq!(half.twist(1).unwrap(), th);
        let tiny = RamifiedSeries::monomial(&k, 1, 1);
        assert!(matches!(tiny.twist(-1), Err(Error::RamificationBudget { .. })));
    }

    #[test]
    fn test_ord_theta() {
        let k = ctx2();
        assert_eq!(RamifiedSeries::theta_pow(&k, 1).ord_lb(), Some(-k.r()));
    }

    #[test]
    fn test_display() {
        let k = Context::new(FieldParams::new(3, 1, 2), Precision::default()).unwrap();
        let x = RamifiedSeries::from_poly(&k, &[2, 0, 1]).truncate(k.vnum(5));
        assert_eq!(x.to_string(), "theta^2 - 1 + O(theta^-5)");
    }
}
