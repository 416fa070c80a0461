//! The module `G_𝒞` glued from the modules of the star tuples along their common top block,
//! the gluing map `Λ`, and the point `Z_𝒞` whose `w`-th coordinate is `Γ_𝒞 ζ_C(𝒞)`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::module_g::ModuleG;
use super::{AndersonModule, TMat};
use crate::error::{Error, Result};
use crate::field::Context;
use crate::mzv::{star_tuples, polylog_expansion, gamma_zeta, CompositionArray, StarTuple, PolylogExpansion};
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement};

#[derive(Clone, Debug)]
pub struct GcAssembly {
    pub data: PolylogExpansion,
    pub tuples: Vec<StarTuple>,
    /// Module of each tuple, built on the reversed array and point.
    pub mods: Vec<ModuleG>,
    pub w: usize,
    pub gc: AndersonModule,
    pub sum: AndersonModule,
    pub lambda: TMat,
}

impl GcAssembly {
    pub fn new(ctx: &Arc<Context>, c: &CompositionArray, floor: i64) -> Result<Self> {
        let data = polylog_expansion(ctx, c, floor)?;
        let tuples = star_tuples(&data);
        if tuples.is_empty() {
            return Err(Error::Rejected("no nonzero star tuples".into()));
        }
        let mut mods = Vec::with_capacity(tuples.len());
        for (i, t) in tuples.iter().enumerate() {
            let pt: Vec<TateElement> = t.point.iter().rev().cloned().collect();
            let g = ModuleG::new(ctx, &t.array.reversed(), &pt)
                .map_err(|e| Error::LogDomain(format!("tuple {}: {e}", i + 1)))?;
            mods.push(g);
        }
        let w = mods[0].d[0] as usize;
        let top_n = mods[0].module.nmat.block(0, 0, w, w);
        let top_e = mods[0].module.e.block(0, 0, w, w);
        for g in &mods {
            if g.d[0] as usize != w || !g.module.nmat.block(0, 0, w, w).same(&top_n) || !g.module.e.block(0, 0, w, w).same(&top_e) {
                return Err(Error::Rejected("tuple modules do not share the top block".into()));
            }
        }
        let kc = w + mods.iter().map(|g| g.dim() - w).sum::<usize>();
        let ksum: usize = mods.iter().map(ModuleG::dim).sum();
        let mut n1 = TMat::zero(ctx, kc, kc);
        let mut e1 = TMat::zero(ctx, kc, kc);
        n1.set_block(0, 0, &top_n);
        e1.set_block(0, 0, &top_e);
        let mut lambda = TMat::zero(ctx, kc, ksum);
        let (mut pos, mut g_off) = (w, 0);
        for g in &mods {
            let k = g.dim();
            let kp = k - w;
            for (src, dst) in [(&g.module.nmat, &mut n1), (&g.module.e, &mut e1)] {
                dst.set_block(0, pos, &src.block(0, w, w, kp));
                dst.set_block(pos, pos, &src.block(w, w, kp, kp));
            }
            for a in 0..w {
                lambda.set(a, g_off + a, TateElement::one(ctx));
            }
            for b in 0..kp {
                lambda.set(pos + b, g_off + w + b, TateElement::one(ctx));
            }
            pos += kp;
            g_off += k;
        }
        let gc = AndersonModule::new(n1, e1)?;
        let refs: Vec<&AndersonModule> = mods.iter().map(|g| &g.module).collect();
        let sum = AndersonModule::direct_sum(&refs)?;
        Ok(GcAssembly { data, tuples, mods, w, gc, sum, lambda })
    }
    #[must_use]
    pub fn ctx(&self) -> &Arc<Context> {
        self.gc.ctx()
    }
    fn a_sign(&self, t: &StarTuple) -> i64 {
        i64::from(t.sign < 0)
    }
    /// `v_𝒞 = λ(G_l(a_l) v_l)`.
    pub fn v_c(&self) -> Result<TMat> {
        let ctx = self.ctx();
        let mut parts = Vec::with_capacity(self.mods.len());
        for (g, t) in self.mods.iter().zip(&self.tuples) {
            parts.push(g.module.apply_monomial(self.a_sign(t), t.a_exp, &g.special_point())?);
        }
        Ok(self.lambda.mul(&TMat::stack(ctx, &parts)))
    }
    /// `Z_𝒞 = λ(∂_{G_l}(a_l) log_{G_l}(v_l))` known to `floor`.
    pub fn z_c(&self, floor: i64) -> Result<TMat> {
        let ctx = self.ctx();
        let rr = ctx.r();
        let mut parts = Vec::with_capacity(self.mods.len());
        for (i, (g, t)) in self.mods.iter().zip(&self.tuples).enumerate() {
            let fl = floor + rr * i64::from(t.a_exp) + 2 * rr;
            let z = g.module.log_apply(&g.special_point(), fl).map_err(|e| match e {
                Error::LogDomain(m) => Error::LogDomain(format!("logarithm domain violated for tuple {}: {m}", i + 1)),
                other => other,
            })?;
            parts.push(g.module.d_monomial(self.a_sign(t), t.a_exp, &z).truncate(floor));
        }
        Ok(self.lambda.mul(&TMat::stack(ctx, &parts)))
    }
    /// Distance between the `w`-th coordinate of `Z_𝒞` and `Γ_𝒞 ζ_C(𝒞)`.
    pub fn coordinate_check(&self, z: &TMat, floor: i64) -> Result<NormExp> {
        let lhs = gamma_zeta(self.ctx(), &self.data, floor)?;
        Ok(z.get(self.w - 1, 0).truncate(floor).dist(&lhs))
    }
    /// `‖exp_{G_𝒞}(Z_𝒞) - v_𝒞‖`.
    pub fn exp_check(&self, z: &TMat, v: &TMat, floor: i64) -> Result<NormExp> {
        Ok(self.gc.exp_apply(z, floor)?.dist(&v.truncate(floor)))
    }
    /// `N_1 Λ = Λ N_2` and `E_1 Λ = Λ E_2` as exact matrix identities.
    #[must_use]
    pub fn lambda_exact(&self) -> bool {
        let l = &self.lambda;
        self.gc.nmat.mul(l).same(&l.mul(&self.sum.nmat)) && self.gc.e.mul(l).same(&l.mul(&self.sum.e))
    }
    /// Worst `‖exp_{G_𝒞}(λf) - λ(exp_⊕ f)‖` over `count` seeded vectors `f`.
    pub fn exp_intertwining(&self, rng: &mut ChaCha8Rng, count: usize, floor: i64) -> Result<NormExp> {
        let ctx = self.ctx();
        let n = self.sum.dim();
        let mut worst = NormExp::Zero;
        for _ in 0..count {
            let f = random_vector(ctx, rng, n);
            let lhs = self.gc.exp_apply(&self.lambda.mul(&f), floor)?;
            let rhs = self.lambda.mul(&self.sum.exp_apply(&f, floor)?);
            worst = worst.max(lhs.dist(&rhs));
        }
        Ok(worst)
    }
}

/// Column vector with entries `c θ^{-e} t_j^m` for small random `c, e, j, m` (norm at most 1).
pub fn random_vector(ctx: &Arc<Context>, rng: &mut ChaCha8Rng, n: usize) -> TMat {
    let fq = ctx.fq();
    let data = (0..n)
        .map(|_| {
            let c = fq[rng.gen_range(0..fq.len())];
            let e = rng.gen_range(0..4i64);
            let x = TateElement::scalar(&RamifiedSeries::monomial(ctx, c, -e * ctx.r()));
            let j = rng.gen_range(0..3usize);
            let m = rng.gen_range(0..3u32);
            if j == 0 { x } else { x.mul(&TateElement::var(ctx, j).pow(m)) }
        })
        .collect();
    TMat::column(ctx, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    #[test]
    fn test_carlitz_twist_case() {
        let k = Context::new(FieldParams::new(2, 1, 1), Precision::default()).unwrap();
        let c = CompositionArray::new(vec![(vec![1], 1)]).unwrap();
        let g = GcAssembly::new(&k, &c, k.vnum(20)).unwrap();
        assert_eq!(g.w, 1);
        assert_eq!(g.gc.dim(), 1);
        assert!(g.lambda_exact());
        let v = g.v_c().unwrap();
        assert!(v.get(0, 0).is_zero_known());
    }
}
