//! The `(r+2-l)`-dimensional system `Ψ_l^{(-1)} = Φ_l Ψ_l` built from the `Q` polynomials, its value
//! at `t = θ`, and the constant-term gauge matrix `U` with `U^{(-1)} b_0 = U`.

use std::sync::Arc;

use super::module_g::strict_chain_columns;
use super::TMat;
use crate::constants::{alpha, b, b_set, omega_beta, omega_big, omega_big_twist_at_theta, omega_set, pi_tilde};
use crate::error::{Error, Result};
use crate::field::Context;
use crate::mzv::{chain_sum, polylog_expansion, gamma_zeta, CompositionArray};
use crate::power_sums::QPolynomial;
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement};

/// `Φ_l`, `Ψ_l` and the data they were built from (rows `l..r` of the array).
#[derive(Clone, Debug)]
pub struct QSystem {
    pub array: CompositionArray,
    pub qs: Vec<QPolynomial>,
    /// `d_j = s_j + ... + s_r` for the rows kept, then `0`.
    pub d: Vec<u32>,
}

impl QSystem {
    /// System for rows `l, ..., r` (0-based `l`).
    pub fn new(ctx: &Arc<Context>, c: &CompositionArray, l: usize) -> Result<Self> {
        let array = c.tail(l);
        let qs = crate::mzv::row_qs(ctx, &array)?;
        let mut d: Vec<u32> = (0..array.depth()).map(|j| array.rows[j..].iter().map(|r| r.s).sum()).collect();
        d.push(0);
        Ok(QSystem { array, qs, d })
    }
    #[must_use]
    pub fn size(&self) -> usize {
        self.d.len()
    }
    fn ctx(&self) -> &Arc<Context> {
        self.qs[0].ctx()
    }
    /// `1/∏_{i≥j} α_i^{(-1)}`.
    fn inv_alpha_twisted(&self, j: usize, floor: i64) -> Result<TateElement> {
        let ctx = self.ctx();
        let mut inv = TateElement::one(ctx);
        for row in &self.array.rows[j..] {
            for &v in &row.u {
                inv = inv.mul(&b(ctx, -1, v, floor + ctx.r())?);
            }
        }
        Ok(inv.truncate(floor))
    }
    pub fn phi(&self, floor: i64) -> Result<TMat> {
        let ctx = self.ctx();
        let n = self.size();
        let tm = TateElement::linear(ctx, 0, &RamifiedSeries::theta_pow(ctx, 1));
        let mut out = TMat::zero(ctx, n, n);
        out.set(n - 1, n - 1, TateElement::one(ctx));
        for j in 0..n - 1 {
            let dj = tm.pow(self.d[j]).mul(&self.inv_alpha_twisted(j, floor)?).truncate(floor);
            let qj = self.qs[j].as_element(floor + 4 * ctx.r())?.twist(-1)?;
            out.set(j + 1, j, qj.mul(&dj).truncate(floor));
            out.set(j, j, dj);
        }
        Ok(out)
    }
    /// Column `Ψ_l` with entries `L_{j,l} Ω^{d_j} ∏_{i≥j} ω_{U_i}`.
    pub fn psi(&self, floor: i64, tcap: Option<u32>) -> Result<TMat> {
        let ctx = self.ctx();
        let n = self.size();
        let rr = ctx.r();
        let inner = floor + 4 * rr;
        let om = omega_big(ctx, inner + 2 * rr * i64::from(self.d[0]), tcap)?;
        let mut xs = Vec::new();
        for (row, qp) in self.array.rows.iter().zip(&self.qs) {
            let qe = qp.as_element(inner + 4 * rr)?;
            xs.push(omega_set(ctx, &row.u, inner + 4 * rr)?.mul(&om.pow(row.s)).mul(&qe).truncate(inner));
        }
        let cols = strict_chain_columns(ctx, &xs, inner)?;
        let mut out = TMat::zero(ctx, n, 1);
        for j in 0..n {
            let mut base = om.pow(self.d[j]);
            for row in &self.array.rows[j.min(n - 1)..] {
                base = base.mul(&omega_set(ctx, &row.u, inner + 2 * rr)?);
            }
            let lj = if j == 0 { TateElement::one(ctx) } else { chain_sum(&cols[..j], &vec![false; j - 1]) };
            out.set(j, 0, lj.mul(&base).truncate(floor));
        }
        Ok(out)
    }
    /// `L_{r+1}(θ)` from `(ω_U Ω^s Q)^{(i)}(θ) = b_i(U) ω_U Ω^{(i)}(θ)^s Q^{(i)}(θ)`.
    pub fn last_at_theta(&self, floor: i64) -> Result<TateElement> {
        let ctx = self.ctx();
        let rr = ctx.r();
        let th = RamifiedSeries::theta_pow(ctx, 1);
        let inner = floor + 4 * rr;
        let mut factors: Vec<Vec<TateElement>> = Vec::new();
        let mut caps = Vec::new();
        for (row, qp) in self.array.rows.iter().zip(&self.qs) {
            let om_u = omega_set(ctx, &row.u, inner)?;
            let qe = qp.as_element(inner * ctx.qi())?;
            let mut col = Vec::new();
            let mut i = 0u32;
            loop {
                let qi = qe.twist(i64::from(i))?.specialize(0, &th, None)?;
                let p = b_set(ctx, i64::from(i), &row.u, 0)?.mul(&om_u).mul(&qi);
                let pn = p.norm().upper().unwrap_or(0).max(0);
                let w = omega_big_twist_at_theta(ctx, i, inner + pn + 2 * rr)?.pow(row.s);
                let v = p.mul_scalar(&w).truncate(inner);
                let small = v.norm().le(-inner);
                col.push(v);
                i += 1;
                if small && i >= 3 {
                    break;
                }
                if i > 30 {
                    return Err(Error::PrecisionUnreachable("twisted factors do not decay".into()));
                }
            }
            caps.push(col.len());
            factors.push(col);
        }
        let len = caps.into_iter().max().unwrap_or(1);
        for col in &mut factors {
            while col.len() < len {
                col.push(TateElement::zero(ctx));
            }
        }
        let weak = vec![false; factors.len() - 1];
        Ok(chain_sum(&factors, &weak).truncate(floor))
    }
    /// Residual of `L_{r+1}(θ) π̃^w = c^w ∏ ω_{U_i} Γ_𝒞 ζ_C(𝒞)`, where `c = Ω(θ)π̃ = ±1`.
    pub fn value_identity(&self, floor: i64) -> Result<NormExp> {
        let ctx = self.ctx();
        let rr = ctx.r();
        let w = self.d[0];
        let pi = pi_tilde(ctx, floor + 4 * rr)?;
        let c = omega_big_twist_at_theta(ctx, 0, floor + 4 * rr)?.mul(&pi);
        let sign = c.leading().map_or(ctx.from_int(1), |(_, s)| s);
        let pi_w = pi.pow(w);
        let lf = floor + pi_w.norm_bound().unwrap_or(0).max(0) + rr;
        let lhs = self.last_at_theta(lf)?.mul_scalar(&pi_w);
        let data = polylog_expansion(ctx, &self.array, floor)?;
        let mut rhs = gamma_zeta(ctx, &data, floor + 4 * rr)?;
        for row in &self.array.rows {
            rhs = rhs.mul(&omega_set(ctx, &row.u, floor + 4 * rr)?);
        }
        let rhs = rhs.mul_scalar(&RamifiedSeries::constant(ctx, ctx.pow(sign, u64::from(w))));
        Ok(lhs.truncate(floor).dist(&rhs.truncate(floor)))
    }
    /// Constant term `b_0` of `Φ_l` in `t`.
    pub fn b0(&self, floor: i64) -> Result<TMat> {
        let phi = self.phi(floor)?;
        let ctx = self.ctx();
        let zero = RamifiedSeries::zero(ctx);
        let n = self.size();
        let mut out = TMat::zero(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, phi.get(i, j).specialize(0, &zero, None)?);
            }
        }
        Ok(out)
    }
    /// Lower triangular `U` with diagonal `ω_{β_k}`, `β_k = (-θ)^{q d_k}/∏_{i≥k} α_i`, and last
    /// diagonal entry `1`; off-diagonal entries solve `c_j(a_{kj}^{(-1)} + Q_j(0)^{(-1)} a_{k,j+1}^{(-1)}) = a_{kj}`.
    pub fn matrix_u(&self, floor: i64) -> Result<TMat> {
        let ctx = self.ctx();
        let n = self.size();
        let rr = ctx.r();
        let q = ctx.qi();
        let inner = floor + 8 * rr;
        let mth = RamifiedSeries::monomial(ctx, ctx.minus_one(), rr);
        let mut u = TMat::zero(ctx, n, n);
        for k in 0..n {
            let diag = if k == n - 1 {
                TateElement::one(ctx)
            } else {
                let mut a = TateElement::one(ctx);
                for row in &self.array.rows[k..] {
                    a = a.mul(&alpha(ctx, &row.u));
                }
                let beta = a.inv_unit(inner * q)?.mul_scalar(&mth.pow(q as u32 * self.d[k]));
                omega_beta(&beta, inner)?
            };
            u.set(k, k, diag);
        }
        for k in 1..n {
            for j in (0..k).rev() {
                let hinv_num = self.array.rows[j..].iter().fold(TateElement::one(ctx), |acc, row| {
                    acc.mul(&row.u.iter().fold(TateElement::one(ctx), |a, &v| {
                        a.mul(&TateElement::linear(ctx, v, &RamifiedSeries::theta_pow(ctx, 1)))
                    }))
                });
                let hinv = hinv_num.twist(-1)?;
                let h_den = mth.pow(self.d[j]);
                let qj = self.qs[j].t_coeffs(inner * q)?[0].neg();
                let g = u.get(k, j + 1).clone();
                let f = solve_twist(&hinv, &h_den, &qj, &g, inner)?;
                u.set(k, j, f);
            }
        }
        Ok(u.truncate(floor))
    }
}

/// `F = Σ_{r≥0} Q^{(r)} G^{(r)} ∏_{m=1}^r (H^{-1})^{(m)}`, the solution of `H(F^{(-1)} - Q^{(-1)}G^{(-1)}) = F`,
/// with `H^{-1} = hinv_num / h_den`.
pub fn solve_twist(hinv_num: &TateElement, h_den: &RamifiedSeries, q: &TateElement, g: &TateElement, floor: i64) -> Result<TateElement> {
    let ctx = g.ctx().clone();
    if q.is_exact_zero() || g.is_exact_zero() {
        return Ok(TateElement::zero(&ctx));
    }
    let mut total = TateElement::zero(&ctx);
    let mut prod = TateElement::one(&ctx);
    let mut below = 0;
    for r in 0..64i64 {
        if r > 0 {
            let den = h_den.twist(r)?;
            let hn = hinv_num.twist(r)?;
            let f = floor + den.norm_bound().unwrap_or(0).max(0) + ctx.r();
            prod = prod.mul(&hn.div_scalar(&den, f)?).truncate(f);
        }
        let term = q.twist(r)?.mul(&g.twist(r)?).mul(&prod).truncate(floor);
        if term.norm().le(-floor) {
            below += 1;
            if below >= 2 {
                return Ok(total.truncate(floor));
            }
        } else {
            below = 0;
        }
        total = total.add(&term);
    }
    Err(Error::PrecisionUnreachable("twist series did not reach the floor".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx2() -> Arc<Context> {
        Context::new(FieldParams::new(2, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_solve_twist_zero() {
        let k = ctx2();
        let one = TateElement::one(&k);
        let f = solve_twist(&one, &RamifiedSeries::theta_pow(&k, 1), &TateElement::zero(&k), &one, k.vnum(10)).unwrap();
        assert!(f.is_exact_zero());
    }

    #[test]
    fn test_depth_two_system() {
        let k = ctx2();
        let c = CompositionArray::new(vec![(vec![1], 1), (vec![], 1)]).unwrap();
        let sys = QSystem::new(&k, &c, 0).unwrap();
        let w = k.vnum(12);
        let psi = sys.psi(2 * w + 4 * k.r(), Some(4)).unwrap();
        let phi = sys.phi(2 * w).unwrap();
        assert!(psi.twist(-1).unwrap().dist(&phi.mul(&psi)).lt(-w));
    }
}
