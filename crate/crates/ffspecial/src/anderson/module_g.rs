//! The module `G` attached to a composition array and a point, whose logarithm at a special
//! point recovers star polylogarithms, together with its rigid analytic trivialization.

use std::sync::Arc;

use super::{AndersonModule, LogDomain, TMat};
use crate::apoly::ell;
use crate::constants::{alpha, b, b_set, omega_big, omega_set};
use crate::error::{Error, Result};
use crate::field::Context;
use crate::mzv::{chain_sum, li, CompositionArray};
use crate::series::RamifiedSeries;
use crate::tate::TateElement;

#[derive(Clone, Debug)]
pub struct ModuleG {
    pub array: CompositionArray,
    pub point: Vec<TateElement>,
    /// `d_j = s_j + ... + s_r`.
    pub d: Vec<u32>,
    /// Start of block `j`.
    pub off: Vec<usize>,
    pub module: AndersonModule,
}

/// `𝔞_m = α_m α_{m+1} ... α_r`.
fn frak_a(ctx: &Arc<Context>, c: &CompositionArray, m: usize) -> TateElement {
    c.rows[m..].iter().fold(TateElement::one(ctx), |acc, row| acc.mul(&alpha(ctx, &row.u)))
}

impl ModuleG {
    pub fn new(ctx: &Arc<Context>, c: &CompositionArray, u: &[TateElement]) -> Result<Self> {
        let r = c.depth();
        if u.len() != r {
            return Err(Error::Config(format!("point has {} components for depth {r}", u.len())));
        }
        let q = ctx.qi();
        let rr = ctx.r();
        for (l, (row, x)) in c.rows.iter().zip(u).enumerate().take(r - 1) {
            let bound = rr * (i64::from(row.s) * q - row.u.len() as i64) / (q - 1);
            if x.norm().upper().is_some_and(|e| e > bound) {
                return Err(Error::OutsideDomain(format!("component {} exceeds q^{{{bound}/{rr}}}", l + 1)));
            }
        }
        let d: Vec<u32> = (0..r).map(|j| c.rows[j..].iter().map(|row| row.s).sum()).collect();
        let mut off = Vec::with_capacity(r);
        let mut k = 0usize;
        for &dj in &d {
            off.push(k);
            k += dj as usize;
        }
        let mut nmat = TMat::zero(ctx, k, k);
        let mut e = TMat::zero(ctx, k, k);
        for j in 0..r {
            for a in 0..d[j] as usize - 1 {
                nmat.set(off[j] + a, off[j] + a + 1, TateElement::one(ctx));
            }
            let row = off[j] + d[j] as usize - 1;
            let mut prod = TateElement::one(ctx);
            for m in j..r {
                let x = frak_a(ctx, c, m).mul(&prod).mul_scalar(&RamifiedSeries::constant(ctx, ctx.sign((m - j) as i64)));
                e.set(row, off[m], x);
                prod = prod.mul(&u[m]);
            }
        }
        let mut module = AndersonModule::new(nmat, e)?;
        let n_tail: Vec<i64> = (0..r).map(|l| c.rows[l..].iter().map(|row| row.u.len() as i64).sum()).collect();
        let mut radius = Vec::with_capacity(k);
        let mut pre = Vec::with_capacity(k);
        for l in 0..r {
            let dl = i64::from(d[l]);
            for j in 1..=dl {
                radius.push(rr * (-(dl - j)) + rr * (dl * q - n_tail[l]) / (q - 1));
                pre.push(rr * (i64::from(d[0]) * q) / (q - 1) - rr * n_tail[l]);
            }
        }
        module.log_domain = Some(LogDomain { radius, pre });
        Ok(ModuleG { array: c.clone(), point: u.to_vec(), d, off, module })
    }
    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        self.module.ctx()
    }
    #[must_use]
    pub fn depth(&self) -> usize {
        self.d.len()
    }
    #[must_use]
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
    /// Index of the last coordinate of block `l`.
    #[must_use]
    pub fn corner(&self, l: usize) -> usize {
        self.off[l] + self.d[l] as usize - 1
    }
    /// `v` with `(-1)^{r-j} u_j ... u_r` in the last coordinate of block `j`.
    #[must_use]
    pub fn special_point(&self) -> TMat {
        let ctx = self.ctx();
        let r = self.depth();
        let mut v = TMat::zero(ctx, self.dim(), 1);
        for j in 0..r {
            let prod = self.point[j..].iter().fold(TateElement::one(ctx), |acc, x| acc.mul(x));
            let s = RamifiedSeries::constant(ctx, ctx.sign((r - 1 - j) as i64));
            v.set(self.corner(j), 0, prod.mul_scalar(&s));
        }
        v
    }
    /// `(-1)^{r-l} Li*` of the rows `r, ..., l` at `(u_r, ..., u_l)`: the expected value of the
    /// logarithm at the special point in coordinate `corner(l)`.
    pub fn star_value(&self, l: usize, floor: i64) -> Result<TateElement> {
        let ctx = self.ctx();
        let r = self.depth();
        let arr = self.array.tail(l).reversed();
        let pt: Vec<TateElement> = self.point[l..].iter().rev().cloned().collect();
        let v = li(ctx, &arr, &pt, true, floor)?;
        Ok(v.mul_scalar(&RamifiedSeries::constant(ctx, ctx.sign((r - 1 - l) as i64))))
    }
    /// Closed form of the `(corner(l), corner(m))` entry of the `i`-th logarithm coefficient.
    pub fn log_corner(&self, i: u32, l: usize, m: usize, floor: i64) -> Result<TateElement> {
        let ctx = self.ctx();
        if m < l {
            return Ok(TateElement::zero(ctx));
        }
        let rr = ctx.r();
        let mut diag = TateElement::one(ctx);
        for row in &self.array.rows[m..] {
            diag = diag.mul(&b_set(ctx, i64::from(i), &row.u, 0)?);
        }
        let lm = ell(ctx, i).pow(self.d[m]);
        let diag_norm = diag.norm().upper().unwrap_or(0).max(0);
        if l == m {
            return diag.div_scalar(&lm, floor);
        }
        if i == 0 {
            return Ok(TateElement::zero(ctx));
        }
        let tail = diag.div_scalar(&lm, floor + rr)?;
        let tail_norm = tail.norm().upper().unwrap_or(0).max(0);
        let inner_floor = floor + tail_norm + 2 * rr + diag_norm.min(0);
        let mut f = Vec::new();
        for j in (l..m).rev() {
            let row = &self.array.rows[j];
            let mut col = Vec::with_capacity(i as usize);
            for k in 0..i {
                let num = self.point[j].twist(i64::from(k))?.mul(&b_set(ctx, i64::from(k), &row.u, 0)?);
                col.push(num.div_scalar(&ell(ctx, k).pow(row.s), inner_floor)?);
            }
            f.push(col);
        }
        let weak = vec![true; f.len() - 1];
        let s = chain_sum(&f, &weak);
        let sign = RamifiedSeries::constant(ctx, ctx.sign((m - l) as i64));
        Ok(s.mul(&tail).mul_scalar(&sign).truncate(floor))
    }
    /// `Φ` with `Ψ^{(-1)} = ΦΨ`: diagonal `(t-θ)^{d_j}/𝔞_j^{(-1)}`, subdiagonal
    /// `u_j^{(-1)}(t-θ)^{d_j}/𝔞_j^{(-1)}`.
    pub fn phi(&self, floor: i64) -> Result<TMat> {
        let ctx = self.ctx();
        let r = self.depth();
        let tm = TateElement::linear(ctx, 0, &RamifiedSeries::theta_pow(ctx, 1));
        let mut out = TMat::zero(ctx, r, r);
        for j in 0..r {
            let mut inv = TateElement::one(ctx);
            for row in &self.array.rows[j..] {
                for &v in &row.u {
                    inv = inv.mul(&b(ctx, -1, v, floor + ctx.r())?);
                }
            }
            let dj = tm.pow(self.d[j]).mul(&inv).truncate(floor);
            if j + 1 < r {
                out.set(j + 1, j, self.point[j].twist(-1)?.mul(&dj).truncate(floor));
            }
            out.set(j, j, dj);
        }
        Ok(out)
    }
    /// `Ψ`: lower triangular with `Ψ[j][l] = L_{l,j} Ω^{d_j} ω_{U_j} ... ω_{U_r}`, where `L_{l,j}` is the
    /// strict chain sum of `τ^{i_m}(ω_{U_m} Ω^{s_m} u_m)` over `m = l, ..., j-1`.
    pub fn psi(&self, floor: i64, tcap: Option<u32>) -> Result<TMat> {
        let ctx = self.ctx();
        let r = self.depth();
        let rr = ctx.r();
        let inner = floor + 4 * rr;
        let om = omega_big(ctx, inner + rr * i64::from(self.d[0]) * 2, tcap)?;
        let mut base = Vec::with_capacity(r);
        for j in 0..r {
            let mut x = om.pow(self.d[j]);
            for row in &self.array.rows[j..] {
                x = x.mul(&omega_set(ctx, &row.u, inner + rr * 2)?);
            }
            base.push(x.truncate(inner));
        }
        let mut xs = Vec::with_capacity(r);
        for (m, row) in self.array.rows.iter().enumerate() {
            let x = omega_set(ctx, &row.u, inner + rr * 2)?.mul(&om.pow(row.s)).mul(&self.point[m]).truncate(inner);
            xs.push(x);
        }
        let chains = strict_chain_columns(ctx, &xs, inner)?;
        let mut out = TMat::zero(ctx, r, r);
        for j in 0..r {
            for l in 0..=j {
                let lj = if l == j { TateElement::one(ctx) } else { chain_sum(&chains[l..j], &vec![false; j - l - 1]) };
                out.set(j, l, lj.mul(&base[j]).truncate(floor));
            }
        }
        Ok(out)
    }
}

/// Columns `τ^i(x_m)`, `i = 0..=top`, with `top` large enough that dropped terms fall below `floor`.
pub(crate) fn strict_chain_columns(ctx: &Arc<Context>, xs: &[TateElement], floor: i64) -> Result<Vec<Vec<TateElement>>> {
    let q = ctx.qi();
    let lmax = xs.iter().filter_map(|x| x.norm().upper()).max().unwrap_or(-1);
    if lmax >= 0 {
        return Err(Error::OutsideDomain("series of twists does not converge".into()));
    }
    let mut top = 0u32;
    while q.pow(top + 1).saturating_mul(lmax) >= -floor {
        top += 1;
    }
    let top = top + xs.len() as u32;
    xs.iter()
        .map(|x| (0..=top).map(|i| x.twist(i64::from(i))).collect::<Result<Vec<_>>>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx2() -> Arc<Context> {
        Context::new(FieldParams::new(2, 1, 1), Precision::default()).unwrap()
    }

    fn depth_two(k: &Arc<Context>) -> ModuleG {
        let c = CompositionArray::new(vec![(vec![1], 1), (vec![], 1)]).unwrap();
        ModuleG::new(k, &c, &[TateElement::var(k, 1), TateElement::one(k)]).unwrap()
    }

    #[test]
    fn test_shape_and_special_point() {
        let k = ctx2();
        let g = depth_two(&k);
        assert_eq!(g.d, vec![2, 1]);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.module.nil, 2);
        let v = g.special_point();
        assert!(v.get(0, 0).is_exact_zero());
        assert_eq!(v.get(1, 0), &TateElement::var(&k, 1));
        assert_eq!(v.get(2, 0), &TateElement::one(&k));
    }

    #[test]
    fn test_log_corners_closed_form() {
        let k = ctx2();
        let g = depth_two(&k);
        let w = k.vnum(30);
        let ps = g.module.log_coeffs(4, &|_| w + 4 * k.r()).unwrap();
        for (i, p) in ps.iter().enumerate() {
            for l in 0..2 {
                for m in l..2 {
                    let closed = g.log_corner(i as u32, l, m, w).unwrap();
                    assert!(p.get(g.corner(l), g.corner(m)).agrees(&closed, w), "i={i} l={l} m={m}");
                }
            }
        }
    }

    #[test]
    fn test_rigid_trivialization() {
        let k = ctx2();
        let g = depth_two(&k);
        let w = k.vnum(15);
        let psi = g.psi(w * 2 + 4 * k.r(), Some(6)).unwrap();
        let phi = g.phi(w * 2).unwrap();
        let lhs = psi.twist(-1).unwrap();
        assert!(lhs.dist(&phi.mul(&psi)).lt(-w));
    }
}
