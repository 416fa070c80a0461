//! Batch driver: runs one configured task and assembles its report.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::anderson::gc::GcAssembly;
use crate::anderson::module_g::ModuleG;
use crate::anderson::rigid::QSystem;
use crate::anderson::tower::{delta_identity, division_tower, small_vector};
use crate::anderson::{carlitz, AndersonModule};
use crate::apoly;
use crate::config::{JobConfig, Task};
use crate::error::{Error, Result};
use crate::field::Context;
use crate::mzv::{
    gauss_thakur, li, li_via_star, lvalue_direct, lvalue_specialize, omega_t, gamma_zeta, verify_polylog_expansion, zeta_deform,
    zeta_partial_via_q, zeta_tuple_enumeration,
};
use crate::power_sums::{power_sum_bruteforce, q_poly_interpolate};
use crate::report::{fmt_frac, fmt_norm, Check, Outcome, Report};
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement};

/// Runs `cfg` and wraps the outcome with the resolved config.
#[must_use]
pub fn run(cfg: &JobConfig) -> Report {
    let mut resolved = cfg.clone();
    let mut out = Outcome::default();
    match cfg.context() {
        Ok(ctx) => {
            resolved.field = ctx.params();
            let r = execute(&ctx, cfg, &mut out);
            out.record(r);
        }
        Err(e) => out.record(Err(e)),
    }
    let config = serde_json::to_value(&resolved).expect("configs always serialize");
    Report::new(config, cfg.seed, out)
}

/// Seeded generator for a job; every randomized check draws from its own stream.
#[must_use]
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Dispatches to the task, appending values and checks to `out`.
pub fn execute(ctx: &Arc<Context>, cfg: &JobConfig, out: &mut Outcome) -> Result<()> {
    let p = &cfg.payload;
    let v = cfg.precision.v_floor;
    let w = cfg.floor(ctx);
    let rr = ctx.r();
    match cfg.task {
        Task::Powersum => {
            let (u, n, d) = (p.u()?, p.n()?, p.d()?);
            let qp = q_poly_interpolate(ctx, &u, n)?;
            let via = qp.power_sum(d, w)?;
            let brute = power_sum_bruteforce(ctx, &u, n, d, w)?;
            // a finite enumeration (degree 0) is exact; prefer it over the truncated value
            out.value("S", if brute.floor().is_none() { &brute } else { &via });
            out.value("S_enumerated", &brute);
            out.check(Check::residual("via_q_matches_enumeration", via.dist(&brute), v, rr));
        }
        Task::Qpoly => {
            let (u, n) = (p.u()?, p.n()?);
            let qp = q_poly_interpolate(ctx, &u, n)?;
            out.value("Q", if qp.m == 0 { qp.qtilde.clone() } else { qp.as_element(w)? });
            out.value("denominator_depth", qp.m);
            out.value("norm_exponent", fmt_norm(qp.norm_exp(), rr));
            out.value("norm_bound", fmt_frac(qp.norm_bound_num(), rr));
            out.check(Check::flag("norm_below_bound", qp.norm_certificate()));
            if qp.u.is_empty() {
                out.check(Check::flag("coefficients_in_a", qp.in_a()));
            }
        }
        Task::Zeta => {
            let c = p.array()?;
            out.value("zeta", zeta_deform(ctx, &c, w)?);
            if let Some(top) = p.top {
                let a = zeta_partial_via_q(ctx, &c, top, w)?;
                let b = zeta_tuple_enumeration(ctx, &c, top, w)?;
                out.check(Check::flag("shells_match_tuple_enumeration", a.same(&b)));
            }
        }
        Task::Polylog => {
            let c = p.array()?;
            let u = p.point(ctx)?;
            out.value(if p.star == Some(true) { "li_star" } else { "li" }, li(ctx, &c, &u, p.star == Some(true), w)?);
        }
        Task::PolylogExpansion => {
            let c = p.array()?;
            let (res, data) = verify_polylog_expansion(ctx, &c, w)?;
            out.value("gamma", &data.gamma);
            out.value("gamma_zeta", gamma_zeta(ctx, &data, w)?);
            out.value("terms", data.terms.len());
            out.check(Check::residual("polylog_expression", res, v, rr));
        }
        Task::Star => {
            let c = p.array()?;
            let u = p.point(ctx)?;
            let a = li(ctx, &c, &u, false, w)?;
            let b = li_via_star(ctx, &c, &u, w)?;
            out.value("li", &a);
            out.check(Check::residual("star_decomposition", a.dist(&b), v, rr));
        }
        Task::Lvalue => {
            let c = p.array()?;
            let bind = p.bindings(ctx)?;
            let top = p.top.unwrap_or(5);
            let a = lvalue_specialize(ctx, &c, &bind, w)?.constant_term();
            let (b, tail) = lvalue_direct(ctx, &c, &bind, top, w)?;
            if tail > -i128::from(w) {
                return Err(Error::PrecisionUnreachable(format!("omitted shells above degree {top} are not below the floor")));
            }
            out.value("l_value", &a);
            out.value("character_sum", &b);
            out.check(Check::residual("specialization_matches_character_sum", norm_of(&a.sub(&b)), v, rr));
        }
        Task::GaussThakur => {
            let pr = p.prime(ctx)?;
            let xi = p.xi(ctx)?;
            let g = gauss_thakur(ctx, &pr, xi, w + rr)?;
            let om = omega_t(ctx, w + rr)?.specialize(0, &RamifiedSeries::constant(ctx, xi), None)?.constant_term();
            let dxi = ctx.eval_poly(&apoly::derivative(ctx, &pr), xi);
            out.value("gauss_thakur", g.truncate(w));
            out.check(Check::flag("nonzero", !g.is_zero_known()));
            out.check(ratio_check("ratio_to_omega", &g.scale(dxi), &om, v, rr));
        }
        Task::ModuleG => {
            let c = p.array()?;
            let u = p.point(ctx)?;
            let g = ModuleG::new(ctx, &c, &u)?;
            let lg = g.module.log_apply(&g.special_point(), w)?;
            for l in 0..g.depth() {
                let x = lg.get(g.corner(l), 0);
                out.value(format!("log_corner_{}", l + 1), x);
                out.check(Check::residual(format!("corner_{}_is_star_polylog", l + 1), x.dist(&g.star_value(l, w)?), v, rr));
            }
            let psi = g.psi(2 * w + 4 * rr, Some(cfg.precision.t_max))?;
            let phi = g.phi(2 * w)?;
            out.check(Check::residual("rigid_trivialization", psi.twist(-1)?.dist(&phi.mul(&psi)), v, rr));
        }
        Task::Gc => {
            let c = p.array()?;
            let g = GcAssembly::new(ctx, &c, w)?;
            let z = g.z_c(w + 4 * rr)?;
            let vc = g.v_c()?;
            out.value("dimension", g.gc.dim());
            out.value("z_w", z.get(g.w - 1, 0).truncate(w));
            for (i, x) in vc.entries().iter().enumerate() {
                out.value(format!("v_{}", i + 1), x);
            }
            out.check(Check::residual("coordinate_w", g.coordinate_check(&z, w)?, v, rr));
            out.check(Check::residual("exp_of_z", g.exp_check(&z, &vc, w)?, v, rr));
            out.check(Check::flag("lambda_intertwines_matrices", g.lambda_exact()));
            let mut rng = rng_for(cfg.seed, 1);
            out.check(Check::residual("lambda_intertwines_exp", g.exp_intertwining(&mut rng, p.samples.unwrap_or(5), w)?, v, rr));
        }
        Task::Rigid => {
            let c = p.array()?;
            let sys = QSystem::new(ctx, &c, p.row.unwrap_or(0))?;
            rigid_checks(&sys, w, cfg.precision.t_max, v, out)?;
        }
        Task::DivisionTower => {
            let m = tower_module(ctx, cfg)?;
            let mut rng = rng_for(cfg.seed, 2);
            let zeta = small_vector(&m, &mut rng, 5);
            let n_max = p.n_max.unwrap_or(10);
            let rep = division_tower(&m, &zeta, n_max, w)?;
            out.value("chain_residual", fmt_norm(rep.chain_residual, rr));
            out.value("chain_floor", fmt_frac(rep.floor, rr));
            out.check(Check::flag("chain_exact_to_floor", rep.chain_ok));
            out.check(Check::residual("recovery", rep.recovery, v / 2, rr));
            out.check(Check::flag("adjoint_identity", delta_identity(&m, &mut rng, p.samples.unwrap_or(10))?));
        }
    }
    Ok(())
}

fn norm_of(x: &RamifiedSeries) -> NormExp {
    TateElement::scalar(x).norm()
}

/// `|a/b - 1| ≤ q^{-v}`, from `|a - b| / |b|`.
fn ratio_check(name: &str, a: &RamifiedSeries, b: &RamifiedSeries, v: i64, rr: i64) -> Check {
    let d = norm_of(&a.sub(b));
    let nb = b.norm_bound().unwrap_or(0);
    let rel = match d {
        NormExp::Zero => NormExp::Zero,
        NormExp::Exact(e) => NormExp::Exact(e - nb),
        NormExp::Below(e) => NormExp::Below(e - nb),
    };
    Check::residual(name, rel, v, rr)
}

pub(crate) fn rigid_checks(sys: &QSystem, w: i64, tmax: u32, v: i64, out: &mut Outcome) -> Result<()> {
    let ctx = sys.qs[0].ctx().clone();
    let rr = ctx.r();
    let psi = sys.psi(2 * w + 4 * rr, Some(tmax))?;
    let phi = sys.phi(2 * w)?;
    out.check(Check::residual("rigid_trivialization", psi.twist(-1)?.dist(&phi.mul(&psi)), v, rr));
    let u = sys.matrix_u(2 * w + 8 * rr)?;
    let b0 = sys.b0(2 * w)?;
    out.check(Check::residual("gauge_equation", u.twist(-1)?.mul(&b0).dist(&u), v, rr));
    let det = (0..u.rows()).fold(TateElement::one(&ctx), |acc, i| acc.mul(u.get(i, i)));
    // the inverse is carried |det| deeper so that det * inverse is resolved down to the floor
    let deep = w + det.norm().upper().unwrap_or(0).max(0);
    let unit = det.inv_unit(deep).is_ok_and(|inv| inv.mul(&det).truncate(w).agrees(&TateElement::one(&ctx), w));
    out.check(Check::flag("unit_determinant", unit));
    out.check(Check::residual("value_at_theta", sys.value_identity(w)?, v, rr));
    Ok(())
}

fn tower_module(ctx: &Arc<Context>, cfg: &JobConfig) -> Result<AndersonModule> {
    match cfg.payload.module.as_deref().unwrap_or("carlitz") {
        "carlitz" => Ok(carlitz(ctx)),
        "g" => {
            let c = cfg.payload.array()?;
            let u = cfg.payload.point(ctx)?;
            Ok(ModuleG::new(ctx, &c, &u)?.module)
        }
        other => Err(Error::Config(format!("unknown module '{other}', expected 'carlitz' or 'g'"))),
    }
}
