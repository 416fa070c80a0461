//! Truncated elements of the Tate algebra in `t` and the `t_j`, with `RamifiedSeries`
//! coefficients.
//!
//! Two truncations are tracked. `floor = Some(f)` says every coefficient is known
//! only above valuation `f/R`, absent monomials included. `tcap = Some(T)` says
//! monomials of total degree above `T` are unknown; the element then lives in the
//! quotient by those monomials, which is closed under `+`, `*` and twisting.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Context, Fe};
use crate::series::{join_terms, min_floor, RamifiedSeries};

/// Number of variable slots: slot 0 is `t`, slots `1..` are `t_1, t_2, ...`.
pub const NVARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    #[must_use]
    pub fn one() -> Self {
        Mono([0; NVARS])
    }
    #[must_use]
    pub fn var(j: usize, k: u16) -> Self {
        let mut m = [0; NVARS];
        m[j] = k;
        Mono(m)
    }
    #[must_use]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }
    #[must_use]
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Mono(m)
    }
    #[must_use]
    pub fn exp(&self, j: usize) -> u16 {
        self.0[j]
    }
    #[must_use]
    pub fn with(&self, j: usize, k: u16) -> Mono {
        let mut m = self.0;
        m[j] = k;
        Mono(m)
    }
    #[must_use]
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Display order: higher total degree first, then larger exponents of `t_1, t_2, ..., t`.
    fn display_cmp(&self, other: &Mono) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            for j in (1..NVARS).chain(std::iter::once(0)) {
                let c = other.0[j].cmp(&self.0[j]);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

pub(crate) fn var_name(j: usize) -> String {
    if j == 0 {
        "t".to_string()
    } else {
        format!("t_{j}")
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for j in (1..NVARS).chain(std::iter::once(0)) {
            match self.0[j] {
                0 => {}
                1 => parts.push(var_name(j)),
                k => parts.push(format!("{}^{k}", var_name(j))),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Gauss norm as a `log_q` numerator over `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormExp {
    Zero,
    Exact(i64),
    /// Only an upper bound is known: `‖x‖ ≤ q^{b/R}`.
    Below(i64),
}

impl NormExp {
    /// Certifies `‖x‖ < q^{bound/R}`.
    #[must_use]
    pub fn lt(&self, bound: i64) -> bool {
        match *self {
            NormExp::Zero => true,
            NormExp::Exact(e) | NormExp::Below(e) => e < bound,
        }
    }
    /// Certifies `‖x‖ ≤ q^{bound/R}`.
    #[must_use]
    pub fn le(&self, bound: i64) -> bool {
        match *self {
            NormExp::Zero => true,
            NormExp::Exact(e) | NormExp::Below(e) => e <= bound,
        }
    }
    #[must_use]
    pub fn exact(&self) -> Option<i64> {
        match *self {
            NormExp::Exact(e) => Some(e),
            _ => None,
        }
    }
    /// Upper bound, `None` for zero.
    #[must_use]
    pub fn upper(&self) -> Option<i64> {
        match *self {
            NormExp::Zero => None,
            NormExp::Exact(e) | NormExp::Below(e) => Some(e),
        }
    }
    #[must_use]
    pub fn max(self, other: NormExp) -> NormExp {
        match (self, other) {
            (NormExp::Zero, x) | (x, NormExp::Zero) => x,
            (a, b) => {
                let (ea, eb) = (a.upper().unwrap(), b.upper().unwrap());
                match ea.cmp(&eb) {
                    Ordering::Greater => a,
                    Ordering::Less => b,
                    Ordering::Equal => {
                        if matches!(a, NormExp::Exact(_)) {
                            a
                        } else {
                            b
                        }
                    }
                }
            }
        }
    }
}

#[derive(Clone)]
pub struct TateElement {
    ctx: Arc<Context>,
    terms: BTreeMap<Mono, RamifiedSeries>,
    floor: Option<i64>,
    tcap: Option<u32>,
}

impl TateElement {
    fn build(ctx: &Arc<Context>, terms: BTreeMap<Mono, RamifiedSeries>, floor: Option<i64>, tcap: Option<u32>) -> Self {
        let mut x = TateElement { ctx: ctx.clone(), terms, floor, tcap };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        let mut floor = self.floor;
        for c in self.terms.values() {
            floor = min_floor(floor, c.floor());
        }
        self.floor = floor;
        if let Some(t) = self.tcap {
            self.terms.retain(|m, _| m.degree() <= t);
        }
        if let Some(f) = floor {
            for c in self.terms.values_mut() {
                if c.floor() != Some(f) || c.is_zero_known() {
                    *c = c.truncate(f);
                }
            }
        }
        self.terms.retain(|_, c| !c.is_zero_known());
    }

    #[must_use]
    pub fn from_terms(ctx: &Arc<Context>, terms: Vec<(Mono, RamifiedSeries)>, floor: Option<i64>, tcap: Option<u32>) -> Self {
        let mut map: BTreeMap<Mono, RamifiedSeries> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::build(ctx, map, floor, tcap)
    }
    #[must_use]
    pub fn zero(ctx: &Arc<Context>) -> Self {
        Self::build(ctx, BTreeMap::new(), None, None)
    }
    #[must_use]
    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::scalar(&RamifiedSeries::one(ctx))
    }
    #[must_use]
    pub fn scalar(c: &RamifiedSeries) -> Self {
        Self::from_terms(c.ctx(), vec![(Mono::one(), c.clone())], None, None)
    }
    /// The variable in slot `j` (`0` is `t`).
    #[must_use]
    pub fn var(ctx: &Arc<Context>, j: usize) -> Self {
        Self::from_terms(ctx, vec![(Mono::var(j, 1), RamifiedSeries::one(ctx))], None, None)
    }
    /// `t_j - c` for a scalar `c`.
    #[must_use]
    pub fn linear(ctx: &Arc<Context>, j: usize, c: &RamifiedSeries) -> Self {
        Self::var(ctx, j).sub(&Self::scalar(c))
    }
    #[must_use]
    pub fn unknown(ctx: &Arc<Context>, floor: i64) -> Self {
        Self::build(ctx, BTreeMap::new(), Some(floor), None)
    }

    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }
    #[must_use]
    pub fn terms(&self) -> &BTreeMap<Mono, RamifiedSeries> {
        &self.terms
    }
    #[must_use]
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }
    #[must_use]
    pub fn tcap(&self) -> Option<u32> {
        self.tcap
    }
    #[must_use]
    pub fn is_exact(&self) -> bool {
        self.floor.is_none() && self.tcap.is_none()
    }
    #[must_use]
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.floor.is_none()
    }
    #[must_use]
    pub fn is_zero_known(&self) -> bool {
        self.terms.is_empty()
    }
    #[must_use]
    pub fn coeff(&self, m: &Mono) -> RamifiedSeries {
        match self.terms.get(m) {
            Some(c) => c.clone(),
            None => match self.floor {
                Some(f) => RamifiedSeries::unknown(&self.ctx, f),
                None => RamifiedSeries::zero(&self.ctx),
            },
        }
    }
    #[must_use]
    pub fn constant_term(&self) -> RamifiedSeries {
        self.coeff(&Mono::one())
    }
    /// Whether the element does not involve any variable.
    #[must_use]
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }
    /// Largest total degree present.
    #[must_use]
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }
    /// Largest exponent of variable `j` present.
    #[must_use]
    pub fn degree_in(&self, j: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(j)).max().unwrap_or(0)
    }
    /// Variables that occur.
    #[must_use]
    pub fn vars(&self) -> Vec<usize> {
        (0..NVARS).filter(|&j| self.degree_in(j) > 0).collect()
    }

    #[must_use]
    pub fn norm(&self) -> NormExp {
        let known = self.terms.values().filter_map(|c| c.max_exp()).max();
        match (known, self.floor) {
            (Some(e), _) => NormExp::Exact(e),
            (None, Some(f)) => NormExp::Below(-f),
            (None, None) => NormExp::Zero,
        }
    }
    /// Lower bound for `ord` of the element; `None` for exact zero.
    #[must_use]
    pub fn ord_lb(&self) -> Option<i64> {
        self.norm().upper().map(|e| -e)
    }

    #[must_use]
    pub fn with_tcap(&self, tcap: Option<u32>) -> Self {
        let cap = match (self.tcap, tcap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Self::build(&self.ctx, self.terms.clone(), self.floor, cap)
    }
    /// Forgets the total-degree truncation; callers must know the omitted part is zero or negligible.
    #[must_use]
    pub fn drop_tcap(&self) -> Self {
        Self::build(&self.ctx, self.terms.clone(), self.floor, None)
    }
    #[must_use]
    pub fn truncate(&self, floor: i64) -> Self {
        Self::build(&self.ctx, self.terms.clone(), min_floor(self.floor, Some(floor)), self.tcap)
    }

    pub fn map_coeffs(&self, f: impl Fn(&RamifiedSeries) -> RamifiedSeries) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).collect();
        let floor = self.floor.map(|fl| f(&RamifiedSeries::unknown(&self.ctx, fl)).floor().unwrap_or(fl));
        Self::build(&self.ctx, terms, floor, self.tcap)
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.neg())).collect();
        TateElement { ctx: self.ctx.clone(), terms, floor: self.floor, tcap: self.tcap }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let c = if negate { c.neg() } else { c.clone() };
            match terms.get_mut(m) {
                Some(v) => *v = v.add(&c),
                None => {
                    terms.insert(*m, c);
                }
            }
        }
        let tcap = match (self.tcap, other.tcap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Self::build(&self.ctx, terms, min_floor(self.floor, other.floor), tcap)
    }
    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }
    #[must_use]
    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.ctx);
        }
        let tcap = match (self.tcap, other.tcap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let ox = self.ord_lb().unwrap_or(0);
        let oy = other.ord_lb().unwrap_or(0);
        let floor = min_floor(self.floor.map(|f| f + oy), other.floor.map(|f| f + ox));
        let mut terms: BTreeMap<Mono, RamifiedSeries> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if tcap.is_some_and(|t| m.degree() > t) {
                    continue;
                }
                let mut p = ca.mul(cb);
                if let Some(f) = floor {
                    p = p.truncate(f);
                }
                match terms.get_mut(&m) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        terms.insert(m, p);
                    }
                }
            }
        }
        Self::build(&self.ctx, terms, floor, tcap)
    }

    #[must_use]
    pub fn mul_scalar(&self, c: &RamifiedSeries) -> Self {
        self.mul(&Self::scalar(c))
    }

    #[must_use]
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ctx).with_tcap(self.tcap);
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

    /// Coefficientwise Frobenius twist `τ^n`.
    pub fn twist(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.twist(n)?);
        }
        let floor = match self.floor {
            Some(f) => RamifiedSeries::unknown(&self.ctx, f).twist(n)?.floor(),
            None => None,
        };
        Ok(Self::build(&self.ctx, terms, floor, self.tcap))
    }

    /// Substitutes `value` for variable `j`. `tail` bounds (as a valuation numerator)
    /// the contribution of monomials beyond the degree cap; it is required when a cap is present.
    pub fn specialize(&self, j: usize, value: &RamifiedSeries, tail: Option<i64>) -> Result<Self> {
        if self.degree_in(j) == 0 && self.tcap.is_none() {
            return Ok(self.clone());
        }
        let vord = value.ord_lb();
        if self.floor.is_some() && vord.is_some_and(|o| o < 0) {
            return Err(Error::OutsideDomain(format!(
                "substituting a value of norm > 1 for {} in a truncated series",
                var_name(j)
            )));
        }
        let mut floor = self.floor;
        let mut tcap = self.tcap;
        if self.tcap.is_some() {
            let Some(tl) = tail else {
                return Err(Error::OutsideDomain(format!(
                    "no tail bound for substituting {} beyond the degree cap",
                    var_name(j)
                )));
            };
            floor = min_floor(floor, Some(tl));
            if self.vars().iter().all(|&v| v == j) {
                tcap = None;
            }
        }
        let mut powers: Vec<RamifiedSeries> = vec![RamifiedSeries::one(&self.ctx)];
        let mut terms: BTreeMap<Mono, RamifiedSeries> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exp(j) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut p = c.mul(&powers[k]);
            if let Some(f) = floor {
                p = p.truncate(f);
            }
            let m2 = m.with(j, 0);
            match terms.get_mut(&m2) {
                Some(v) => *v = v.add(&p),
                None => {
                    terms.insert(m2, p);
                }
            }
        }
        Ok(Self::build(&self.ctx, terms, floor, tcap))
    }

    /// Renames variable `from` to `to`, multiplying monomials together.
    #[must_use]
    pub fn rename(&self, from: usize, to: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let k = m.exp(from);
                let m2 = m.with(from, 0);
                (m2.with(to, m2.exp(to) + k), c.clone())
            })
            .collect();
        Self::from_terms(&self.ctx, terms, self.floor, self.tcap)
    }

    /// Coefficients with respect to variable `j`, low to high.
    #[must_use]
    pub fn coeffs_in(&self, j: usize) -> Vec<TateElement> {
        let deg = self.degree_in(j) as usize;
        let mut out: Vec<Vec<(Mono, RamifiedSeries)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            out[m.exp(j) as usize].push((m.with(j, 0), c.clone()));
        }
        out.into_iter().map(|v| Self::from_terms(&self.ctx, v, self.floor, self.tcap)).collect()
    }
    /// Coefficients in `t`, low to high.
    #[must_use]
    pub fn t_coeffs(&self) -> Vec<TateElement> {
        self.coeffs_in(0)
    }

    /// Exact division by `t_j - c`; fails if the remainder is known to be nonzero.
    pub fn div_linear(&self, j: usize, c: &RamifiedSeries) -> Result<Self> {
        let p = self.coeffs_in(j);
        let n = p.len();
        if n <= 1 {
            if p.first().is_none_or(TateElement::is_zero_known) {
                return Ok(Self::build(&self.ctx, BTreeMap::new(), self.floor, self.tcap));
            }
            return Err(Error::Rejected(format!("not divisible by {} - c", var_name(j))));
        }
        let cs = Self::scalar(c);
        let mut q: Vec<TateElement> = vec![Self::zero(&self.ctx); n - 1];
        q[n - 2] = p[n - 1].clone();
        for k in (1..n - 1).rev() {
            q[k - 1] = p[k].add(&cs.mul(&q[k]));
        }
        let rem = p[0].add(&cs.mul(&q[0]));
        if !rem.is_zero_known() {
            return Err(Error::Rejected(format!("not divisible by {} - c", var_name(j))));
        }
        let mut out = Self::zero(&self.ctx);
        let xj = Self::var(&self.ctx, j);
        for qk in q.iter().rev() {
            out = out.mul(&xj).add(qk);
        }
        Ok(Self::build(&self.ctx, out.terms, min_floor(out.floor, rem.floor), self.tcap))
    }

    /// Division by a scalar series, inverse computed to keep the quotient known to `floor`.
    pub fn div_scalar(&self, d: &RamifiedSeries, floor: i64) -> Result<Self> {
        let top = self.norm().upper().unwrap_or(0);
        let dinv = d.inv(floor + top.max(0) + 1)?;
        Ok(self.mul_scalar(&dinv).truncate(floor))
    }

    /// The term of largest norm, if unique and attached to a scalar coefficient in `F_{q^m}^×`.
    #[must_use]
    pub fn dominant_scalar(&self) -> Option<RamifiedSeries> {
        let NormExp::Exact(top) = self.norm() else {
            return None;
        };
        let mut found = None;
        for (m, c) in &self.terms {
            for &(e, x) in c.terms() {
                if e == top {
                    if !m.is_one() || found.is_some() {
                        return None;
                    }
                    found = Some(RamifiedSeries::monomial(&self.ctx, x, e));
                }
            }
        }
        found
    }

    /// Inverse of a unit `y(1 + ε)` with `y` a dominant scalar monomial, known to `floor`.
    pub fn inv_unit(&self, floor: i64) -> Result<Self> {
        let y = self
            .dominant_scalar()
            .ok_or_else(|| Error::NotAUnit("no dominant scalar term".into()))?;
        let yinv = y.inv(0)?;
        let oy = y.ord_lb().unwrap();
        // x = y(1 + eps)
        let eps = self.mul_scalar(&yinv).sub(&Self::one(&self.ctx));
        let w = floor + oy;
        let eps = eps.truncate(w.max(1));
        let e_ord = eps.ord_lb();
        if e_ord.is_some_and(|o| o <= 0) {
            return Err(Error::NotAUnit("perturbation is not small at this precision".into()));
        }
        let mut sum = Self::one(&self.ctx).truncate(w).with_tcap(self.tcap);
        let mut pw = Self::one(&self.ctx).with_tcap(self.tcap);
        let minus_eps = eps.neg();
        for _ in 0..100_000 {
            pw = pw.mul(&minus_eps).truncate(w);
            if pw.is_zero_known() {
                break;
            }
            sum = sum.add(&pw);
        }
        Ok(sum.mul_scalar(&yinv).truncate(floor))
    }

    /// `‖self - other‖`.
    #[must_use]
    pub fn dist(&self, other: &Self) -> NormExp {
        self.sub(other).norm()
    }

    /// Agreement of all terms above `floor`.
    #[must_use]
    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        self.dist(other).le(-floor)
    }

    /// Exact agreement of representations.
    #[must_use]
    pub fn same(&self, other: &Self) -> bool {
        self.floor == other.floor && self.tcap == other.tcap && self.terms == other.terms
    }

    /// Whether the element lies in `A[t_Σ]`: exactly known with coefficients in `F_q[θ]`.
    #[must_use]
    pub fn is_in_a(&self) -> bool {
        self.terms.values().all(RamifiedSeries::is_in_a)
    }

    /// Known terms whose coefficients all lie in `F_q[θ]` (ignores the floor).
    #[must_use]
    pub fn known_terms_in_a(&self) -> bool {
        let r = self.ctx.r();
        self.terms
            .values()
            .all(|c| c.terms().iter().all(|&(e, x)| e >= 0 && e % r == 0 && self.ctx.in_fq(x)))
    }

    /// Canonical term order for display and serialization.
    #[must_use]
    pub fn sorted_terms(&self) -> Vec<(Mono, RamifiedSeries)> {
        let mut v: Vec<(Mono, RamifiedSeries)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| a.0.display_cmp(&b.0));
        v
    }

    /// Evaluates an exact polynomial in `A` (listed low to high over `F_q`) at variable `j`.
    #[must_use]
    pub fn poly_in_var(ctx: &Arc<Context>, coeffs: &[Fe], j: usize) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (Mono::var(j, k as u16), RamifiedSeries::constant(ctx, c)))
            .collect();
        Self::from_terms(ctx, terms, None, None)
    }
}

impl fmt::Display for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (m, c) in self.sorted_terms() {
            let mut ct = c.fmt_terms();
            if m.is_one() && c.floor().is_some() && c.floor() == self.floor {
                // the global marker below already says this
                ct.pop();
            }
            if m.is_one() {
                parts.extend(ct);
            } else if ct.len() == 1 {
                let (neg, s) = &ct[0];
                if s == "1" {
                    parts.push((*neg, m.to_string()));
                } else {
                    parts.push((*neg, format!("{s}*{m}")));
                }
            } else {
                parts.push((false, format!("({})*{m}", join_terms(&ct))));
            }
        }
        if let Some(fl) = self.floor {
            parts.push((false, RamifiedSeries::unknown(&self.ctx, fl).to_string()));
        }
        if let Some(t) = self.tcap {
            parts.push((false, format!("O(deg>{t})")));
        }
        f.write_str(&join_terms(&parts))
    }
}

impl fmt::Debug for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TateElement({self})")
    }
}

impl PartialEq for TateElement {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx(q: u32) -> Arc<Context> {
        Context::new(FieldParams::new(q, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_norm_of_linear_form() {
        let k = ctx(2);
        let x = TateElement::linear(&k, 1, &RamifiedSeries::theta_pow(&k, 1));
        assert_eq!(x.norm(), NormExp::Exact(k.r()));
        assert_eq!(x.to_string(), "t_1 + theta");
    }

    #[test]
    fn test_twist_fixes_variables() {
        let k = ctx(2);
        let x = TateElement::linear(&k, 1, &RamifiedSeries::theta_pow(&k, 1));
        let y = x.twist(1).unwrap();
        assert_eq!(y, TateElement::linear(&k, 1, &RamifiedSeries::theta_pow(&k, 2)));
        assert_eq!(y.twist(-1).unwrap(), x);
    }

    #[test]
    fn test_specialize_at_finite_field_point() {
        let k = Context::new(FieldParams::new(2, 1, 2), Precision::default()).unwrap();
        // a = θ + 1 evaluated in t_1
        let a = TateElement::poly_in_var(&k, &[1, 1], 1);
        let xi = k.roots_of(&[1, 1, 1])[0];
        let v = a.specialize(1, &RamifiedSeries::constant(&k, xi), None).unwrap();
        assert_eq!(v.constant_term(), RamifiedSeries::constant(&k, k.add(xi, 1)));
    }

    #[test]
    fn test_inverse_unit() {
        let k = ctx(3);
        let x = TateElement::linear(&k, 1, &RamifiedSeries::theta_pow(&k, 1));
        let w = k.vnum(20);
        let y = x.inv_unit(w).unwrap();
        let one = x.mul(&y);
        assert!(one.dist(&TateElement::one(&k)).le(-w + k.r()));
    }

    #[test]
    fn test_div_linear() {
        let k = ctx(3);
        let th = RamifiedSeries::theta_pow(&k, 1);
        let a = TateElement::linear(&k, 1, &th);
        let b = TateElement::linear(&k, 0, &th.pow(3));
        let p = a.mul(&b);
        assert_eq!(p.div_linear(1, &th).unwrap(), b);
        assert!(p.div_linear(1, &th.pow(2)).is_err());
    }

    #[test]
    fn test_truncated_degree() {
        let k = ctx(2);
        let x = TateElement::var(&k, 0).add(&TateElement::one(&k)).with_tcap(Some(2));
        let y = x.pow(3);
        assert_eq!(y.total_degree(), 2);
        assert_eq!(y.to_string(), "t^2 + t + 1 + O(deg>2)");
    }
}
