//! The acceptance suite: fifteen criteria, each run in isolation and summarized as
//! pass, fail or precision unreachable.
//!
//! `floor` is the largest precision (in whole `θ`-digits) the run may certify. Criteria
//! whose tolerance lies beyond it report "precision unreachable" without computing.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::anderson::gc::{random_vector, GcAssembly};
use crate::anderson::module_g::ModuleG;
use crate::anderson::rigid::QSystem;
use crate::anderson::tower::{delta_identity, division_tower, small_vector};
use crate::anderson::{ad_pow, bracket, carlitz, AndersonModule, TMat};
use crate::apoly::{dfact, ell};
use crate::config::{Binding, JobConfig, Payload, RowSpec, Task, CONFIG_SCHEMA};
use crate::constants::{omega_big, omega_big_twist_at_theta, omega_var, pi_tilde, theta_qpow};
use crate::error::{Error, Result};
use crate::field::{Context, Fe, FieldParams, Precision};
use crate::harness::{rigid_checks, rng_for, run};
use crate::mzv::{
    gauss_thakur, li, li_via_star, lvalue_direct, lvalue_specialize, omega_t, verify_polylog_expansion, zeta_deform,
    zeta_partial_bruteforce_shells, zeta_partial_via_q, zeta_tuple_enumeration, CompositionArray,
};
use crate::power_sums::{power_sum_bruteforce, q_poly_interpolate, QPolynomial};
use crate::report::{fmt_norm, Check, Outcome, Status, Tool};
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement};

pub const SELFTEST_SCHEMA: &str = "ffspecial.selftest/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub v_floor: i64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 0, v_floor: 40 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub status: Status,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema: String,
    pub tool: Tool,
    pub config: SelftestConfig,
    pub status: Status,
    pub exit_code: i32,
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
}

impl SelftestReport {
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
    /// One line per criterion, for terminals.
    #[must_use]
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::PrecisionUnreachable => "PRECISION UNREACHABLE",
                Status::ConfigError => "ERROR",
            };
            s.push_str(&format!("criterion {:>2} {:<40} {tag}\n", c.id, c.title));
        }
        s
    }
}

type CriterionFn = fn(&Suite, &mut Outcome) -> Result<()>;

/// Criterion table: id, title, floor needed (0 when every check is exact), body.
const CRITERIA: [(u32, &str, i64, CriterionFn); 15] = [
    (1, "power sums via Q vs enumeration", 40, c01_power_sums),
    (2, "Q norm certificates", 0, c02_q_certificates),
    (3, "Omega and omega functional equations", 40, c03_omega),
    (4, "zeta shell sums vs tuple enumeration", 0, c04_zeta_shells),
    (5, "polylogarithm expression of zeta", 30, c05_polylog),
    (6, "star decomposition", 25, c06_star),
    (7, "exponential and logarithm coefficients", 25, c07_exp_log),
    (8, "log corner closed form", 0, c08_log_corners),
    (9, "log of G at the special point", 25, c09_log_special_point),
    (10, "Z_C in the module G_C", 25, c10_gc),
    (11, "single-variable zeta and omega identity", 40, c11_one_variable_zeta),
    (12, "rigid analytic trivialization", 25, c12_rigid),
    (13, "division towers", 20, c13_towers),
    (14, "Dirichlet-Goss values and Gauss-Thakur sums", 30, c14_dirichlet_goss),
    (15, "determinism of task reports", 0, c15_determinism),
];

/// `Q` polynomials keyed by `(p, U, N)`, shared between criteria 1 and 2.
type QCache = std::cell::RefCell<BTreeMap<(u32, Vec<usize>, u32), QPolynomial>>;

struct Suite {
    cfg: SelftestConfig,
    ctx: BTreeMap<(u32, u32), Arc<Context>>,
    qs: QCache,
}

impl Suite {
    fn ctx(&self, p: u32, m: u32) -> Arc<Context> {
        self.ctx[&(p, m)].clone()
    }
    fn rng(&self, id: u32) -> ChaCha8Rng {
        rng_for(self.cfg.seed, 100 + u64::from(id))
    }
    fn q_poly(&self, ctx: &Arc<Context>, u: &[usize], n: u32) -> Result<QPolynomial> {
        let key = (ctx.p(), u.to_vec(), n);
        if let Some(q) = self.qs.borrow().get(&key) {
            return Ok(q.clone());
        }
        let q = q_poly_interpolate(ctx, u, n)?;
        self.qs.borrow_mut().insert(key, q.clone());
        Ok(q)
    }
}

/// Runs every criterion (or those listed in `only`).
pub fn selftest(cfg: SelftestConfig, only: Option<&[u32]>) -> Result<SelftestReport> {
    let mut ctx = BTreeMap::new();
    for (p, m) in [(2, 1), (3, 1), (2, 2)] {
        ctx.insert((p, m), Context::new(FieldParams::new(p, 1, m), Precision::default())?);
    }
    let suite = Suite { cfg, ctx, qs: QCache::default() };
    let mut criteria = Vec::new();
    let mut status = Status::Pass;
    for (id, title, need, body) in CRITERIA {
        if only.is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let mut out = Outcome::default();
        if cfg.v_floor < need {
            out.record(Err(Error::PrecisionUnreachable(format!(
                "tolerance q^-{need} lies beyond the selftest floor {}",
                cfg.v_floor
            ))));
        } else {
            let r = body(&suite, &mut out);
            out.record(r);
        }
        let st = out.status();
        status = status.combine(st);
        criteria.push(CriterionReport { id, title: title.into(), status: st, outcome: out });
    }
    Ok(SelftestReport {
        schema: SELFTEST_SCHEMA.into(),
        tool: Tool::default(),
        config: cfg,
        status,
        exit_code: status.exit_code(),
        seed: cfg.seed,
        criteria,
    })
}

fn arr(rows: &[(&[usize], u32)]) -> CompositionArray {
    CompositionArray::new(rows.iter().map(|(u, s)| (u.to_vec(), *s)).collect()).expect("fixed arrays are valid")
}

fn theta(ctx: &Arc<Context>, k: i64) -> RamifiedSeries {
    RamifiedSeries::theta_pow(ctx, k)
}

/// `t_j - θ`.
fn t_minus_theta(ctx: &Arc<Context>, j: usize) -> TateElement {
    TateElement::linear(ctx, j, &theta(ctx, 1))
}

fn c01_power_sums(s: &Suite, out: &mut Outcome) -> Result<()> {
    for p in [2, 3] {
        let k = s.ctx(p, 1);
        let w = k.vnum(40);
        for u in [vec![], vec![1], vec![1, 2]] {
            for n in 1..=4 {
                let qp = s.q_poly(&k, &u, n)?;
                for (label, ds) in [("d0-4", 0..=4), ("d5-6", 5..=6)] {
                    let mut worst = NormExp::Zero;
                    for d in ds {
                        worst = worst.max(qp.power_sum(d, w)?.dist(&power_sum_bruteforce(&k, &u, n, d, w)?));
                    }
                    out.check(Check::residual(format!("q={p} U={u:?} N={n} {label}"), worst, 40, k.r()));
                }
            }
        }
    }
    Ok(())
}

fn c02_q_certificates(s: &Suite, out: &mut Outcome) -> Result<()> {
    for p in [2, 3] {
        let k = s.ctx(p, 1);
        let mut cert = true;
        let mut in_a = true;
        for u in [vec![], vec![1], vec![1, 2]] {
            for n in 1..=4 {
                let qp = s.q_poly(&k, &u, n)?;
                cert &= qp.norm_certificate();
                if u.is_empty() {
                    in_a &= qp.in_a();
                }
            }
        }
        out.check(Check::flag(format!("q={p} norm below q^((Nq-|U|)/(q-1))"), cert));
        out.check(Check::flag(format!("q={p} Q for empty U in A[t]"), in_a));
        let q1 = s.q_poly(&k, &[1], 1)?;
        let expect = TateElement::var(&k, 1).sub(&TateElement::var(&k, 0));
        out.check(Check::flag(format!("q={p} Q_(1),1 = t_1 - t"), q1.m == 0 && q1.qtilde.same(&expect)));
        out.value(format!("q={p} Q_(1),1"), &q1.qtilde);
    }
    // q = 2, U = {1,2}, N = 1: (t_1-t)(t_2-t)(1 - (t-θ)/((t_1-θ^{1/2})(t_2-θ^{1/2})))
    let k = s.ctx(2, 1);
    let qp = s.q_poly(&k, &[1, 2], 1)?;
    let h = theta_qpow(&k, -1)?;
    let den = TateElement::linear(&k, 1, &h).mul(&TateElement::linear(&k, 2, &h));
    let lead = TateElement::var(&k, 1).sub(&TateElement::var(&k, 0)).mul(&TateElement::var(&k, 2).sub(&TateElement::var(&k, 0)));
    let expect = lead.mul(&den.sub(&t_minus_theta(&k, 0)));
    out.check(Check::flag("q=2 Q_(1,2),1 closed form", qp.m == 1 && qp.qtilde.same(&expect)));
    Ok(())
}

fn c03_omega(s: &Suite, out: &mut Outcome) -> Result<()> {
    for p in [2, 3] {
        let k = s.ctx(p, 1);
        let (w, rr, q) = (k.vnum(40), k.r(), k.qi());
        let om = omega_big(&k, w * q + 2 * rr, Some(10))?;
        let res = om.twist(-1)?.dist(&t_minus_theta(&k, 0).mul(&om));
        out.check(Check::residual(format!("q={p} Omega^(-1) = (t-theta) Omega"), res, 40, rr));
        let om1 = omega_var(&k, 1, w + 2 * rr)?;
        let res = om1.twist(1)?.dist(&t_minus_theta(&k, 1).mul(&om1));
        out.check(Check::residual(format!("q={p} tau(omega_1) = (t_1-theta) omega_1"), res, 40, rr));
        out.value(format!("q={p} log_q norm of omega_1"), fmt_norm(om1.norm(), rr));
        out.check(Check::flag(format!("q={p} norm of omega_1 is q^(1/(q-1))"), om1.norm() == NormExp::Exact(rr / (q - 1))));
    }
    let k = s.ctx(2, 1);
    let w = k.vnum(40);
    let prod = omega_big_twist_at_theta(&k, 0, w + 2 * k.r())?.mul(&pi_tilde(&k, w + 2 * k.r())?);
    out.check(Check::residual("q=2 Omega(theta) pi = 1", TateElement::scalar(&prod.sub(&RamifiedSeries::one(&k))).norm(), 40, k.r()));
    Ok(())
}

fn c04_zeta_shells(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let w = k.vnum(40);
    let arrays = [
        arr(&[(&[], 1)]),
        arr(&[(&[1], 1)]),
        arr(&[(&[1, 2], 2)]),
        arr(&[(&[], 1), (&[], 1)]),
        arr(&[(&[1], 1), (&[], 1)]),
        arr(&[(&[], 2), (&[1], 1)]),
    ];
    for c in &arrays {
        let tuples = zeta_tuple_enumeration(&k, c, 6, w)?;
        let via_q = zeta_partial_via_q(&k, c, 6, w)?;
        let shells = zeta_partial_bruteforce_shells(&k, c, 6, w)?;
        out.check(Check::flag(format!("{c} via Q"), via_q.same(&tuples)));
        out.check(Check::flag(format!("{c} enumerated shells"), shells.same(&tuples)));
    }
    Ok(())
}

fn c05_polylog(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let w = k.vnum(30);
    for c in [
        arr(&[(&[1], 1)]),
        arr(&[(&[], 2)]),
        arr(&[(&[1], 1), (&[], 1)]),
        arr(&[(&[], 2), (&[], 1)]),
    ] {
        let (res, data) = verify_polylog_expansion(&k, &c, w)?;
        out.check(Check::residual(format!("{c} ({} terms)", data.terms.len()), res, 30, k.r()));
    }
    Ok(())
}

/// A point with components `c θ^{-e} t_j`, `e ∈ 0..3`, `j ∈ 0..3` (`j = 0` means no variable).
fn seeded_point(ctx: &Arc<Context>, rng: &mut ChaCha8Rng, r: usize) -> Vec<TateElement> {
    let fq: Vec<Fe> = ctx.fq().iter().copied().filter(|&c| c != 0).collect();
    (0..r)
        .map(|_| {
            let c = fq[rng.gen_range(0..fq.len())];
            let e = rng.gen_range(0..3i64);
            let x = TateElement::scalar(&RamifiedSeries::monomial(ctx, c, -e * ctx.r()));
            match rng.gen_range(0..3usize) {
                0 => x,
                j => x.mul(&TateElement::var(ctx, j)),
            }
        })
        .collect()
}

fn c06_star(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let w = k.vnum(25);
    let mut rng = s.rng(6);
    for c in [arr(&[(&[1], 1), (&[], 1)]), arr(&[(&[1], 1), (&[], 1), (&[2], 1)])] {
        for i in 0..5 {
            let u = seeded_point(&k, &mut rng, c.depth());
            let a = li(&k, &c, &u, false, w)?;
            let b = li_via_star(&k, &c, &u, w)?;
            out.check(Check::residual(format!("{c} point {}", i + 1), a.dist(&b), 25, k.r()));
        }
    }
    Ok(())
}

fn depth_two_g(ctx: &Arc<Context>) -> Result<ModuleG> {
    ModuleG::new(ctx, &arr(&[(&[1], 1), (&[], 1)]), &[TateElement::var(ctx, 1), TateElement::one(ctx)])
}

/// `‖Σ_{i+j=n} P_i β_j^{(i)}‖` for `n = 1..=order`: the coefficients of `log ∘ exp - id`.
fn composition_residuals(m: &AndersonModule, ps: &[TMat], bs: &[TMat], order: usize) -> Result<NormExp> {
    let ctx = m.ctx();
    let mut worst = NormExp::Zero;
    for n in 1..=order {
        let mut acc = TMat::zero(ctx, m.dim(), m.dim());
        for i in 0..=n {
            acc = acc.add(&ps[i].mul(&bs[n - i].twist(i as i64)?));
        }
        worst = worst.max(acc.norm());
    }
    Ok(worst)
}

fn c07_exp_log(s: &Suite, out: &mut Outcome) -> Result<()> {
    for p in [2, 3] {
        let k = s.ctx(p, 1);
        let w = k.vnum(40);
        let c = carlitz(&k);
        let one = RamifiedSeries::one(&k);
        let betas = c.exp_coeffs(2, &|_| w)?;
        let ps = c.log_coeffs(1, &|_| w)?;
        out.check(Check::flag(format!("q={p} beta_1 = 1/(theta^q-theta)"), betas[1].get(0, 0).constant_term().agrees(&one.div(&bracket(&k, 1), w)?, w)));
        out.check(Check::flag(format!("q={p} beta_2 = 1/D_2"), betas[2].get(0, 0).constant_term().agrees(&one.div(&dfact(&k, 2), w)?, w)));
        out.check(Check::flag(format!("q={p} P_1 = 1/l_1"), ps[1].get(0, 0).constant_term().agrees(&one.div(&ell(&k, 1), w)?, w)));
    }
    let k = s.ctx(2, 1);
    let rr = k.r();
    let g = depth_two_g(&k)?;
    let carl = carlitz(&k);
    for (name, m) in [("Carlitz", &carl), ("G", &g.module)] {
        // deep enough that β_8 and P_8 are resolved down to their bounds
        let bf = -(m.beta_bound(8) as i64) + rr;
        let pf = -(m.p_bound(8) as i64) + rr;
        let bs = m.exp_coeffs(8, &|_| bf)?;
        let ps = m.log_coeffs(8, &|_| pf)?;
        let beta_ok = (0..=8u32).all(|i| bs[i as usize].norm().le(m.beta_bound(i) as i64));
        let p_ok = (0..=8u32).all(|i| ps[i as usize].norm().le(m.p_bound(i) as i64));
        out.check(Check::flag(format!("{name} beta_i bound, i <= 8"), beta_ok));
        out.check(Check::flag(format!("{name} P_i bound, i <= 8"), p_ok));
        out.check(Check::residual(format!("{name} log o exp coefficients to order 8"), composition_residuals(m, &ps, &bs, 8)?, 25, rr));
    }
    let w = k.vnum(25);
    let mut rng = s.rng(7);
    let mut worst = NormExp::Zero;
    for _ in 0..5 {
        let x = small_vector(&g.module, &mut rng, 3);
        let y = g.module.exp_apply(&x, w + 4 * rr)?;
        worst = worst.max(g.module.log_apply(&y, w)?.dist(&x));
    }
    out.check(Check::residual("G log(exp(x)) = x on 5 seeded vectors", worst, 25, rr));
    let deeper = ModuleG::new(&k, &arr(&[(&[1], 1), (&[], 2)]), &[TateElement::var(&k, 1), TateElement::one(&k)])?;
    for (name, m) in [("G", &g.module), ("G (d=3,2)", &deeper.module)] {
        let top = 2 * m.nil - 1;
        let mut ok = ad_pow(&m.nmat, &m.e, top).is_exact_zero();
        for _ in 0..3 {
            let cols: Vec<TMat> = (0..m.dim()).map(|_| random_vector(&k, &mut rng, m.dim())).collect();
            let mut y = TMat::zero(&k, m.dim(), m.dim());
            for (j, col) in cols.iter().enumerate() {
                y.set_block(0, j, col);
            }
            ok &= ad_pow(&m.nmat, &y, top).is_exact_zero();
        }
        out.check(Check::flag(format!("{name} ad(N)^{top} = 0"), ok));
    }
    Ok(())
}

fn c08_log_corners(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let w = k.vnum(40);
    let g = depth_two_g(&k)?;
    let ps = g.module.log_coeffs(6, &|_| w + 4 * k.r())?;
    for (i, p) in ps.iter().enumerate() {
        let mut ok = true;
        for l in 0..2 {
            for m in l..2 {
                ok &= p.get(g.corner(l), g.corner(m)).agrees(&g.log_corner(i as u32, l, m, w)?, w);
            }
        }
        out.check(Check::flag(format!("i={i}"), ok));
    }
    Ok(())
}

fn c09_log_special_point(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let w = k.vnum(25);
    let g = depth_two_g(&k)?;
    let lg = g.module.log_apply(&g.special_point(), w)?;
    for l in 0..g.depth() {
        let res = lg.get(g.corner(l), 0).dist(&g.star_value(l, w)?);
        out.check(Check::residual(format!("corner {} is a star polylog", l + 1), res, 25, k.r()));
    }
    Ok(())
}

fn c10_gc(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let (w, rr) = (k.vnum(25), k.r());
    let mut rng = s.rng(10);
    for c in [arr(&[(&[1], 1)]), arr(&[(&[], 2), (&[], 1)])] {
        let g = GcAssembly::new(&k, &c, w)?;
        let z = g.z_c(w + 4 * rr)?;
        let v = g.v_c()?;
        out.check(Check::residual(format!("{c} w-th coordinate of Z_C"), g.coordinate_check(&z, w)?, 25, rr));
        out.check(Check::residual(format!("{c} exp(Z_C) = v_C"), g.exp_check(&z, &v, w)?, 25, rr));
        out.check(Check::flag(format!("{c} Lambda intertwines N and E"), g.lambda_exact()));
        out.check(Check::residual(format!("{c} Lambda intertwines exp"), g.exp_intertwining(&mut rng, 5, w)?, 25, rr));
    }
    Ok(())
}

fn c11_one_variable_zeta(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let (w, rr) = (k.vnum(40), k.r());
    let c = arr(&[(&[1], 1)]);
    let g = GcAssembly::new(&k, &c, w)?;
    let v = g.v_c()?;
    out.check(Check::flag("n=1: v_C = 0 exactly", v.is_exact_zero()));
    let inner = w + 4 * rr;
    let z = zeta_deform(&k, &c, inner)?;
    let lhs = t_minus_theta(&k, 1).mul(&z).mul(&omega_var(&k, 1, inner)?).add(&TateElement::scalar(&pi_tilde(&k, inner)?));
    out.check(Check::residual("n=1: (t_1-theta) zeta omega_1 + pi", lhs.truncate(w).norm(), 40, rr));
    let g2 = GcAssembly::new(&k, &arr(&[(&[1, 2], 1)]), w)?;
    let v2 = g2.v_c()?;
    for (i, x) in v2.entries().iter().enumerate() {
        out.value(format!("n=2: v_C[{}]", i + 1), x);
    }
    out.check(Check::flag("n=2: v_C entries in A[t_1,t_2]", v2.entries().iter().all(TateElement::known_terms_in_a)));
    Ok(())
}

fn c12_rigid(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let (w, rr) = (k.vnum(25), k.r());
    let g = depth_two_g(&k)?;
    let psi = g.psi(2 * w + 4 * rr, Some(8))?;
    let phi = g.phi(2 * w)?;
    out.check(Check::residual("module G: Psi^(-1) = Phi Psi", psi.twist(-1)?.dist(&phi.mul(&psi)), 25, rr));
    for c in [arr(&[(&[1], 1), (&[], 1)]), arr(&[(&[], 2), (&[], 1)])] {
        for l in 0..2 {
            let sys = QSystem::new(&k, &c, l)?;
            let mut sub = Outcome::default();
            if l == 0 {
                rigid_checks(&sys, w, 8, 25, &mut sub)?;
            } else {
                let psi = sys.psi(2 * w + 4 * rr, Some(8))?;
                let phi = sys.phi(2 * w)?;
                sub.check(Check::residual("rigid_trivialization", psi.twist(-1)?.dist(&phi.mul(&psi)), 25, rr));
            }
            for mut ch in sub.checks {
                ch.name = format!("{c} l={} {}", l + 1, ch.name);
                out.check(ch);
            }
        }
    }
    Ok(())
}

fn c13_towers(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 1);
    let g = depth_two_g(&k)?;
    let mut rng = s.rng(13);
    for (name, m) in [("Carlitz", carlitz(&k)), ("G", g.module.clone())] {
        let zeta = small_vector(&m, &mut rng, 5);
        let rep = division_tower(&m, &zeta, 10, k.vnum(36))?;
        out.check(Check::flag(format!("{name} chain G_theta(f_(n+1)) = f_n"), rep.chain_ok));
        out.check(Check::residual(format!("{name} recovery of zeta"), rep.recovery, 20, k.r()));
        out.check(Check::flag(format!("{name} adjoint identity on 10 seeded tau-polynomials"), delta_identity(&m, &mut rng, 10)?));
    }
    Ok(())
}

fn c14_dirichlet_goss(s: &Suite, out: &mut Outcome) -> Result<()> {
    let k = s.ctx(2, 2);
    let (w, rr) = (k.vnum(30), k.r());
    let prime: [Fe; 3] = [1, 1, 1];
    for xi in k.roots_of(&prime) {
        let xs = k.fmt_elem(xi);
        for c in [arr(&[(&[1], 1)]), arr(&[(&[1], 1), (&[], 1)]), arr(&[(&[1], 2)])] {
            let a = lvalue_specialize(&k, &c, &[(1, xi)], w)?.constant_term();
            let (b, tail) = lvalue_direct(&k, &c, &[(1, xi)], 5, w)?;
            out.check(Check::flag(format!("{c} xi={xs} omitted shells below floor"), tail <= -i128::from(w)));
            out.check(Check::residual(format!("{c} xi={xs} specialization = character sum"), TateElement::scalar(&a.sub(&b)).norm(), 30, rr));
        }
        let g = gauss_thakur(&k, &prime, xi, w + rr)?;
        let om = omega_t(&k, w + rr)?.specialize(0, &RamifiedSeries::constant(&k, xi), None)?.constant_term();
        // 𝔭' = 2θ + 1 = 1 in characteristic 2, so the ratio g 𝔭'(ξ)/ω(ξ) is g/ω
        let rel = TateElement::scalar(&g.sub(&om)).norm();
        let rel = match (rel, om.norm_bound()) {
            (NormExp::Exact(e), Some(n)) => NormExp::Exact(e - n),
            (NormExp::Below(e), Some(n)) => NormExp::Below(e - n),
            (x, _) => x,
        };
        out.check(Check::flag(format!("xi={xs} Gauss-Thakur sum nonzero"), !g.is_zero_known()));
        out.check(Check::residual(format!("xi={xs} g p'(xi)/omega(xi) = 1"), rel, 30, rr));
    }
    Ok(())
}

/// Small task configs exercised by the determinism check.
#[must_use]
pub fn sample_configs(seed: u64) -> Vec<JobConfig> {
    let base = |p: u32, m: u32, v: i64, task: Task, payload: Payload| JobConfig {
        schema: CONFIG_SCHEMA.into(),
        field: FieldParams::new(p, 1, m),
        precision: Precision { v_floor: v, ..Precision::default() },
        task,
        seed,
        payload,
    };
    let row = |u: &[usize], s: u32| RowSpec { u: u.to_vec(), s };
    vec![
        base(3, 1, 40, Task::Qpoly, Payload { u: Some(vec![1]), n: Some(1), ..Payload::default() }),
        base(2, 1, 40, Task::Powersum, Payload { u: Some(vec![1]), n: Some(2), d: Some(3), ..Payload::default() }),
        base(2, 1, 30, Task::PolylogExpansion, Payload { array: Some(vec![row(&[1], 1)]), ..Payload::default() }),
        base(2, 1, 20, Task::Gc, Payload { array: Some(vec![row(&[1], 1)]), samples: Some(3), ..Payload::default() }),
        base(2, 1, 30, Task::DivisionTower, Payload { n_max: Some(6), samples: Some(4), ..Payload::default() }),
        base(
            2,
            2,
            30,
            Task::Lvalue,
            Payload {
                array: Some(vec![row(&[1], 1)]),
                bindings: Some(vec![Binding { var: 1, value: "g^1".into() }]),
                ..Payload::default()
            },
        ),
    ]
}

fn c15_determinism(s: &Suite, out: &mut Outcome) -> Result<()> {
    for cfg in sample_configs(s.cfg.seed) {
        let a = run(&cfg).to_json();
        let b = run(&cfg).to_json();
        out.check(Check::flag(format!("{} report bytes identical", cfg.task.name()), a == b));
    }
    Ok(())
}
