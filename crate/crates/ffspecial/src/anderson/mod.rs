//! Anderson modules `φ(θ) = θ Id + N + E τ` over the Tate algebra: matrices, the action of
//! `A`, and the exponential and logarithm coefficient streams.

pub mod gc;
pub mod module_g;
pub mod rigid;
pub mod tower;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Context;
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement};

/// Dense matrix of Tate algebra elements (column vectors are `n × 1`).
#[derive(Clone, Debug)]
pub struct TMat {
    ctx: Arc<Context>,
    rows: usize,
    cols: usize,
    data: Vec<TateElement>,
}

impl TMat {
    #[must_use]
    pub fn zero(ctx: &Arc<Context>, rows: usize, cols: usize) -> Self {
        TMat { ctx: ctx.clone(), rows, cols, data: vec![TateElement::zero(ctx); rows * cols] }
    }
    #[must_use]
    pub fn identity(ctx: &Arc<Context>, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, TateElement::one(ctx));
        }
        m
    }
    #[must_use]
    pub fn column(ctx: &Arc<Context>, v: Vec<TateElement>) -> Self {
        TMat { ctx: ctx.clone(), rows: v.len(), cols: 1, data: v }
    }
    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> &TateElement {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: TateElement) {
        self.data[i * self.cols + j] = x;
    }
    #[must_use]
    pub fn entries(&self) -> &[TateElement] {
        &self.data
    }
    /// Entries of a column vector.
    #[must_use]
    pub fn to_vec(&self) -> Vec<TateElement> {
        self.data.clone()
    }
    fn map(&self, f: impl Fn(&TateElement) -> TateElement) -> Self {
        TMat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    fn zip(&self, other: &Self, f: impl Fn(&TateElement, &TateElement) -> TateElement) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        TMat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }
    #[must_use]
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, TateElement::add)
    }
    #[must_use]
    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, TateElement::sub)
    }
    #[must_use]
    pub fn neg(&self) -> Self {
        self.map(TateElement::neg)
    }
    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }
    #[must_use]
    pub fn mul_scalar(&self, c: &RamifiedSeries) -> Self {
        self.map(|x| x.mul_scalar(c))
    }
    #[must_use]
    pub fn mul_elem(&self, c: &TateElement) -> Self {
        self.map(|x| x.mul(c))
    }
    pub fn div_scalar(&self, d: &RamifiedSeries, floor: i64) -> Result<Self> {
        let data = self.data.iter().map(|x| x.div_scalar(d, floor)).collect::<Result<_>>()?;
        Ok(TMat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data })
    }
    pub fn twist(&self, n: i64) -> Result<Self> {
        let data = self.data.iter().map(|x| x.twist(n)).collect::<Result<_>>()?;
        Ok(TMat { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data })
    }
    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }
    #[must_use]
    pub fn truncate(&self, floor: i64) -> Self {
        self.map(|x| x.truncate(floor))
    }
    #[must_use]
    pub fn with_tcap(&self, tcap: Option<u32>) -> Self {
        self.map(|x| x.with_tcap(tcap))
    }
    #[must_use]
    pub fn norm(&self) -> NormExp {
        self.data.iter().fold(NormExp::Zero, |acc, x| acc.max(x.norm()))
    }
    #[must_use]
    pub fn dist(&self, other: &Self) -> NormExp {
        self.sub(other).norm()
    }
    #[must_use]
    pub fn same(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data.iter().zip(&other.data).all(|(a, b)| a.same(b))
    }
    #[must_use]
    pub fn is_exact_zero(&self) -> bool {
        self.data.iter().all(TateElement::is_exact_zero)
    }
    /// Whether every entry agrees to `floor`.
    #[must_use]
    pub fn agrees(&self, other: &Self, floor: i64) -> bool {
        self.dist(other).lt(-floor + 1)
    }
    #[must_use]
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zero(&self.ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }
    /// Block-diagonal sum.
    #[must_use]
    pub fn direct_sum(ctx: &Arc<Context>, blocks: &[TMat]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zero(ctx, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            out.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        out
    }
    /// Stacks column vectors.
    #[must_use]
    pub fn stack(ctx: &Arc<Context>, parts: &[TMat]) -> Self {
        Self::column(ctx, parts.iter().flat_map(|p| p.data.iter().cloned()).collect())
    }
}

/// `[i] = θ^{q^i} - θ`.
#[must_use]
pub fn bracket(ctx: &Arc<Context>, i: u32) -> RamifiedSeries {
    RamifiedSeries::theta_pow(ctx, ctx.qi().pow(i)).sub(&RamifiedSeries::theta_pow(ctx, 1))
}

/// `ad(N)^j(Y)` computed by iterated commutators.
#[must_use]
pub fn ad_pow(n: &TMat, y: &TMat, j: usize) -> TMat {
    let mut out = y.clone();
    for _ in 0..j {
        out = n.mul(&out).sub(&out.mul(n));
    }
    out
}

/// Per-coordinate data certifying convergence of the logarithm:
/// `‖P_i x^{(i)}‖ ≤ max_c q^{(pre_c + q^i (log‖x_c‖ - radius_c))/R}`.
#[derive(Clone, Debug)]
pub struct LogDomain {
    pub radius: Vec<i64>,
    pub pre: Vec<i64>,
}

/// Anderson module of shape `θ Id + N + E τ` with `N` nilpotent over `F_q`.
#[derive(Clone, Debug)]
pub struct AndersonModule {
    pub nmat: TMat,
    pub e: TMat,
    /// Smallest `d'` with `N^{d'} = 0`.
    pub nil: usize,
    pub log_domain: Option<LogDomain>,
}

impl AndersonModule {
    pub fn new(nmat: TMat, e: TMat) -> Result<Self> {
        let n = nmat.rows();
        if nmat.cols() != n || e.rows() != n || e.cols() != n {
            return Err(Error::Config("N and E must be square of the same size".into()));
        }
        if nmat.entries().iter().any(|x| !x.is_scalar() || !x.is_exact() || !x.constant_term().terms().iter().all(|&(e, _)| e == 0)) {
            return Err(Error::Config("N must have entries in F_q".into()));
        }
        let mut p = TMat::identity(nmat.ctx(), n);
        let mut nil = 0;
        while !p.is_exact_zero() {
            p = p.mul(&nmat);
            nil += 1;
            if nil > n {
                return Err(Error::Config("N is not nilpotent".into()));
            }
        }
        Ok(AndersonModule { nmat, e, nil, log_domain: None })
    }
    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        self.nmat.ctx()
    }
    #[must_use]
    pub fn dim(&self) -> usize {
        self.nmat.rows()
    }
    /// `∂_φ(θ) = θ Id + N`.
    #[must_use]
    pub fn d_theta(&self) -> TMat {
        let ctx = self.ctx();
        TMat::identity(ctx, self.dim()).mul_scalar(&RamifiedSeries::theta_pow(ctx, 1)).add(&self.nmat)
    }
    /// `φ(θ)·x = θx + Nx + E τ(x)`.
    pub fn apply_theta(&self, x: &TMat) -> Result<TMat> {
        Ok(self.d_theta().mul(x).add(&self.e.mul(&x.twist(1)?)))
    }
    /// `φ(c θ^k)·x` by repeated application.
    pub fn apply_monomial(&self, sign: i64, k: u32, x: &TMat) -> Result<TMat> {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.apply_theta(&y)?;
        }
        Ok(y.mul_scalar(&RamifiedSeries::constant(self.ctx(), self.ctx().sign(sign))))
    }
    /// `∂_φ(c θ^k)·x`.
    #[must_use]
    pub fn d_monomial(&self, sign: i64, k: u32, x: &TMat) -> TMat {
        let d = self.d_theta();
        let mut y = x.clone();
        for _ in 0..k {
            y = d.mul(&y);
        }
        y.mul_scalar(&RamifiedSeries::constant(self.ctx(), self.ctx().sign(sign)))
    }
    /// `∂_φ(θ)^{-m} x` through `(θ + N)^{-1} = Σ_j (-N)^j θ^{-j-1}`.
    #[must_use]
    pub fn d_theta_inv_pow(&self, m: u32, x: &TMat) -> TMat {
        let ctx = self.ctx();
        let mut y = x.clone();
        for _ in 0..m {
            let mut acc = TMat::zero(ctx, y.rows(), 1);
            let mut term = y.clone();
            for j in 0..self.nil.max(1) {
                acc = acc.add(&term.mul_scalar(&RamifiedSeries::theta_pow(ctx, -(j as i64) - 1)));
                term = self.nmat.mul(&term).neg();
            }
            y = acc;
        }
        y
    }
    /// Norm exponent of `E` (numerator over `R`).
    #[must_use]
    pub fn e_norm(&self) -> i64 {
        self.e.norm().upper().unwrap_or(0)
    }
    /// A priori bound `-i q^i + i log‖E‖` (numerator over `R`) for `log‖β_i‖`.
    #[must_use]
    pub fn beta_bound(&self, i: u32) -> i128 {
        let ctx = self.ctx();
        let qi = i128::from(ctx.qi()).pow(i);
        -i128::from(i) * qi * i128::from(ctx.r()) + i128::from(i) * i128::from(self.e_norm())
    }
    /// Recursive bound for `log‖P_i‖`: `b_{i+1} = b_i + q^i log‖E‖ - q^{i+1}`.
    #[must_use]
    pub fn p_bound(&self, i: u32) -> i128 {
        let ctx = self.ctx();
        let q = i128::from(ctx.qi());
        let r = i128::from(ctx.r());
        let e = i128::from(self.e_norm());
        (0..i).map(|k| q.pow(k) * e - q.pow(k + 1) * r).sum()
    }
    /// `β_0, ..., β_order` with `β_i` known to `floor_for(i)`.
    pub fn exp_coeffs(&self, order: u32, floor_for: &dyn Fn(u32) -> i64) -> Result<Vec<TMat>> {
        let ctx = self.ctx();
        let n = self.dim();
        let mut out = vec![TMat::identity(ctx, n)];
        let jmax = 2 * self.nil.max(1) - 2;
        for i in 0..order {
            let br = bracket(ctx, i + 1);
            let base = self.e.mul(&out[i as usize].twist(1)?);
            let fl = floor_for(i + 1);
            let mut acc = TMat::zero(ctx, n, n);
            let mut ad = base;
            let mut den = br.clone();
            for j in 0..=jmax {
                if j > 0 {
                    ad = self.nmat.mul(&ad).sub(&ad.mul(&self.nmat));
                    den = den.mul(&br);
                }
                acc = acc.add(&ad.div_scalar(&den, fl)?);
            }
            out.push(acc.truncate(fl));
        }
        Ok(out)
    }
    /// `P_0, ..., P_order` with `P_i` known to `floor_for(i)`.
    pub fn log_coeffs(&self, order: u32, floor_for: &dyn Fn(u32) -> i64) -> Result<Vec<TMat>> {
        let ctx = self.ctx();
        let n = self.dim();
        let mut out = vec![TMat::identity(ctx, n)];
        let jmax = 2 * self.nil.max(1) - 2;
        for i in 0..order {
            let br = bracket(ctx, i + 1);
            let base = out[i as usize].mul(&self.e.twist(i64::from(i))?);
            let fl = floor_for(i + 1);
            let mut acc = TMat::zero(ctx, n, n);
            let mut ad = base;
            let mut den = br.clone();
            for j in 0..=jmax {
                if j > 0 {
                    ad = self.nmat.mul(&ad).sub(&ad.mul(&self.nmat));
                    den = den.mul(&br);
                }
                acc = acc.sub(&ad.div_scalar(&den, fl)?);
            }
            out.push(acc.truncate(fl));
        }
        Ok(out)
    }
    /// Smallest order after which all exponential terms at a point of norm `q^{lx/R}` stay below
    /// `q^{-floor/R}`.
    #[must_use]
    pub fn exp_order(&self, lx: i64, floor: i64) -> u32 {
        let ctx = self.ctx();
        let q = i128::from(ctx.qi());
        let r = i128::from(ctx.r());
        let e = i128::from(self.e_norm());
        let lx = i128::from(lx);
        let w = i128::from(floor);
        let mut i: u32 = 1;
        loop {
            let qi = q.pow(i);
            let term = -i128::from(i) * qi * r + i128::from(i) * e + qi * lx;
            let decreasing = (i128::from(i) + 1) * q * r - i128::from(i) * r - (q - 1) * lx - e > 0;
            if term < -w && decreasing {
                return i - 1;
            }
            i += 1;
        }
    }
    /// `exp_φ(x) = Σ β_i τ^i(x)` known to `floor`.
    pub fn exp_apply(&self, x: &TMat, floor: i64) -> Result<TMat> {
        let Some(lx) = x.norm().upper() else {
            return Ok(x.clone());
        };
        let order = self.exp_order(lx, floor);
        let r = self.ctx().r();
        let q = self.ctx().qi();
        let fl = move |i: u32| floor + q.pow(i) * lx.max(0) + 2 * r;
        let betas = self.exp_coeffs(order, &fl)?;
        let mut acc = TMat::zero(self.ctx(), x.rows(), 1);
        for (i, b) in betas.iter().enumerate() {
            acc = acc.add(&b.mul(&x.twist(i as i64)?));
        }
        Ok(acc.truncate(floor))
    }
    /// Order needed by the logarithm at `x` for `floor`, from the certified domain data.
    pub fn log_order(&self, x: &TMat, floor: i64) -> Result<u32> {
        let dom = self.log_domain.as_ref().ok_or_else(|| Error::LogDomain("no convergence certificate for this module".into()))?;
        let q = i128::from(self.ctx().qi());
        let w = i128::from(floor);
        let mut coords = Vec::new();
        for (c, xc) in x.entries().iter().enumerate() {
            if let Some(l) = xc.norm().upper() {
                if l >= dom.radius[c] {
                    return Err(Error::LogDomain(format!("coordinate {} has norm exponent {l}, radius {}", c + 1, dom.radius[c])));
                }
                coords.push((i128::from(dom.pre[c]), i128::from(l - dom.radius[c])));
            }
        }
        let mut i: u32 = 0;
        loop {
            let qi = q.pow(i);
            if coords.iter().all(|&(p, gap)| p + qi * gap < -w) {
                return Ok(i.saturating_sub(1));
            }
            i += 1;
            if i > 40 {
                return Err(Error::PrecisionUnreachable("logarithm needs more than 40 terms".into()));
            }
        }
    }
    /// `log_φ(x) = Σ P_i τ^i(x)` known to `floor`.
    pub fn log_apply(&self, x: &TMat, floor: i64) -> Result<TMat> {
        let Some(lx) = x.norm().upper() else {
            return Ok(x.clone());
        };
        let order = self.log_order(x, floor)?;
        let r = self.ctx().r();
        let q = self.ctx().qi();
        let fl = move |i: u32| floor + q.pow(i) * lx.max(0) + 2 * r;
        let ps = self.log_coeffs(order, &fl)?;
        let mut acc = TMat::zero(self.ctx(), x.rows(), 1);
        for (i, p) in ps.iter().enumerate() {
            acc = acc.add(&p.mul(&x.twist(i as i64)?));
        }
        Ok(acc.truncate(floor))
    }
    /// Direct sum of modules.
    pub fn direct_sum(mods: &[&AndersonModule]) -> Result<AndersonModule> {
        let ctx = mods[0].ctx().clone();
        let n: Vec<TMat> = mods.iter().map(|m| m.nmat.clone()).collect();
        let e: Vec<TMat> = mods.iter().map(|m| m.e.clone()).collect();
        let mut out = AndersonModule::new(TMat::direct_sum(&ctx, &n), TMat::direct_sum(&ctx, &e))?;
        if mods.iter().all(|m| m.log_domain.is_some()) {
            let mut radius = Vec::new();
            let mut pre = Vec::new();
            for m in mods {
                let d = m.log_domain.as_ref().unwrap();
                radius.extend(&d.radius);
                pre.extend(&d.pre);
            }
            out.log_domain = Some(LogDomain { radius, pre });
        }
        Ok(out)
    }
}

/// Carlitz module `C(θ) = θ + τ`.
#[must_use]
pub fn carlitz(ctx: &Arc<Context>) -> AndersonModule {
    let mut m = AndersonModule::new(TMat::zero(ctx, 1, 1), TMat::identity(ctx, 1)).expect("valid shape");
    // log converges for ‖x‖ < q^{q/(q-1)}
    let r = ctx.r();
    m.log_domain = Some(LogDomain { radius: vec![r * ctx.qi() / (ctx.qi() - 1)], pre: vec![r * ctx.qi() / (ctx.qi() - 1)] });
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apoly::{dfact, ell};
    use crate::field::{FieldParams, Precision};

    fn ctx(p: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_carlitz_first_coefficients() {
        for p in [2, 3] {
            let k = ctx(p);
            let w = k.vnum(30);
            let c = carlitz(&k);
            let betas = c.exp_coeffs(2, &|_| w).unwrap();
            let b1 = RamifiedSeries::one(&k).div(&bracket(&k, 1), w).unwrap();
            assert!(betas[1].get(0, 0).constant_term().agrees(&b1, w));
            let b2 = RamifiedSeries::one(&k).div(&dfact(&k, 2), w).unwrap();
            assert!(betas[2].get(0, 0).constant_term().agrees(&b2, w));
            let ps = c.log_coeffs(1, &|_| w).unwrap();
            let p1 = RamifiedSeries::one(&k).div(&ell(&k, 1), w).unwrap();
            assert!(ps[1].get(0, 0).constant_term().agrees(&p1, w));
        }
    }

    #[test]
    fn test_exp_of_zero() {
        let k = ctx(3);
        let c = carlitz(&k);
        let z = TMat::zero(&k, 1, 1);
        assert!(c.exp_apply(&z, k.vnum(20)).unwrap().is_exact_zero());
    }

    #[test]
    fn test_ad_vanishing() {
        let k = ctx(2);
        let mut n = TMat::zero(&k, 3, 3);
        n.set(0, 1, TateElement::one(&k));
        n.set(1, 2, TateElement::one(&k));
        let mut y = TMat::zero(&k, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                y.set(i, j, TateElement::var(&k, 1).add(&TateElement::scalar(&RamifiedSeries::theta_pow(&k, (i + 2 * j) as i64))));
            }
        }
        assert!(!ad_pow(&n, &y, 2).is_exact_zero());
        assert!(ad_pow(&n, &y, 5).is_exact_zero());
    }

    #[test]
    fn test_carlitz_log_exp_roundtrip() {
        let k = ctx(2);
        let w = k.vnum(30);
        let c = carlitz(&k);
        let x = TMat::column(&k, vec![TateElement::scalar(&RamifiedSeries::theta_pow(&k, -1)).add(&TateElement::var(&k, 1))]);
        let y = c.exp_apply(&x, w + k.r() * 4).unwrap();
        let back = c.log_apply(&y, w).unwrap();
        assert!(back.agrees(&x, w));
    }
}
