//! Deformed multiple zeta values, multiple (star) polylogarithms, the star decomposition,
//! the polylogarithm expression of `ζ_C`, and Dirichlet–Goss specializations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::apoly::{self, ell};
use crate::constants::{b_set, omega_beta};
use crate::error::{Error, Result};
use crate::field::{Context, Fe};
use crate::power_sums::{power_sum_bruteforce, q_poly_interpolate, QPolynomial};
use crate::series::RamifiedSeries;
use crate::tate::{NormExp, TateElement, NVARS};

/// Hard cap on the number of shells summed for a polylogarithm.
const LI_SHELL_CAP: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub u: Vec<usize>,
    pub s: u32,
}

/// Rows `(U_1, ..., U_r ; s_1, ..., s_r)`. `U` is kept as a sorted multiset so that merged
/// rows carry repeated variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionArray {
    pub rows: Vec<Row>,
}

impl CompositionArray {
    pub fn new(rows: Vec<(Vec<usize>, u32)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Config("composition array needs at least one row".into()));
        }
        let mut out = Vec::new();
        for (mut u, s) in rows {
            if s == 0 {
                return Err(Error::Config("s_i must be positive".into()));
            }
            if u.iter().any(|&j| j == 0 || j >= NVARS) {
                return Err(Error::Config(format!("variable indices must lie in 1..{}", NVARS - 1)));
            }
            u.sort_unstable();
            out.push(Row { u, s });
        }
        Ok(CompositionArray { rows: out })
    }
    #[must_use]
    pub fn depth(&self) -> usize {
        self.rows.len()
    }
    #[must_use]
    pub fn weight(&self) -> u32 {
        self.rows.iter().map(|r| r.s).sum()
    }
    /// `Σ = ∪ U_i`, sorted without repetition.
    #[must_use]
    pub fn sigma(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows.iter().flat_map(|r| r.u.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
    /// Whether the `U_i` are pairwise disjoint.
    #[must_use]
    pub fn disjoint(&self) -> bool {
        let all: usize = self.rows.iter().map(|r| r.u.len()).sum();
        let mut v: Vec<usize> = self.rows.iter().flat_map(|r| r.u.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v.len() == all
    }
    /// Sub-array of rows `from..` (0-based).
    #[must_use]
    pub fn tail(&self, from: usize) -> Self {
        CompositionArray { rows: self.rows[from..].to_vec() }
    }
    #[must_use]
    pub fn reversed(&self) -> Self {
        CompositionArray { rows: self.rows.iter().rev().cloned().collect() }
    }
}

fn fmt_set(u: &[usize]) -> String {
    let inner: Vec<String> = u.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for CompositionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let us: Vec<String> = self.rows.iter().map(|r| fmt_set(&r.u)).collect();
        let ss: Vec<String> = self.rows.iter().map(|r| r.s.to_string()).collect();
        write!(f, "(({});({}))", us.join(","), ss.join(","))
    }
}

/// `log_q` numerators (over `R`) are combined in `i128` to avoid overflow from `q^i` factors.
fn nu(ctx: &Context, i: u32, l_num: i128, n: usize, s: u32) -> i128 {
    let q = i128::from(ctx.qi());
    let r = i128::from(ctx.r());
    let c = r * (n as i128 - i128::from(s) * q) / (q - 1);
    q.pow(i) * (l_num + c) - c
}

/// `Σ_{i_1 ⋄ i_2 ⋄ ... ⋄ i_r ≥ 0} f_1(i_1) ... f_r(i_r)` over `i_1 ≤ top`, where `⋄` is `>`
/// or `≥` per step (`weak[j]` for the step between rows `j` and `j+1`).
#[must_use]
pub fn chain_sum(f: &[Vec<TateElement>], weak: &[bool]) -> TateElement {
    let ctx = f[0][0].ctx().clone();
    let r = f.len();
    let len = f[0].len();
    let mut acc: Vec<TateElement> = f[r - 1].clone();
    for j in (0..r - 1).rev() {
        let mut next = Vec::with_capacity(len);
        let mut prefix = TateElement::zero(&ctx);
        for i in 0..len {
            if weak[j] {
                prefix = prefix.add(&acc[i]);
            }
            next.push(f[j][i].mul(&prefix));
            if !weak[j] {
                prefix = prefix.add(&acc[i]);
            }
        }
        acc = next;
    }
    acc.iter().fold(TateElement::zero(&ctx), |s, x| s.add(x))
}

/// `Li_𝒞(u)` (strict chain) or `Li*_𝒞(u)` (weak chain), known to `floor`.
pub fn li(ctx: &Arc<Context>, c: &CompositionArray, u: &[TateElement], star: bool, floor: i64) -> Result<TateElement> {
    let r = c.depth();
    if u.len() != r {
        return Err(Error::Config(format!("point has {} components for depth {r}", u.len())));
    }
    if u.iter().any(TateElement::is_exact_zero) {
        return Ok(TateElement::zero(ctx));
    }
    let q = i128::from(ctx.qi());
    let rr = i128::from(ctx.r());
    let mut l = Vec::with_capacity(r);
    for (j, (row, x)) in c.rows.iter().zip(u).enumerate() {
        let lj = i128::from(x.norm().upper().unwrap_or(i64::MIN / 4));
        let bound = rr * (i128::from(row.s) * q - row.u.len() as i128) / (q - 1);
        let ok = if star && j > 0 { lj <= bound } else { lj < bound };
        if !ok {
            return Err(Error::OutsideDomain(format!("component {} has norm exponent {lj}/{rr}, bound {bound}/{rr}", j + 1)));
        }
        l.push(lj);
    }
    let w = i128::from(floor);
    let pos: Vec<i128> = l.iter().map(|&x| x.max(0)).collect();
    let others: i128 = pos[1..].iter().sum();
    let mut top = 0u32;
    while nu(ctx, top + 1, l[0], c.rows[0].u.len(), c.rows[0].s) + others >= -w {
        top += 1;
        if top > LI_SHELL_CAP {
            return Err(Error::PrecisionUnreachable(format!("polylogarithm needs more than {LI_SHELL_CAP} shells")));
        }
    }
    let top = top + 2;
    let total_pos: i128 = pos.iter().sum();
    let mut f = Vec::with_capacity(r);
    for (j, (row, x)) in c.rows.iter().zip(u).enumerate() {
        let fj = (w + total_pos - pos[j] + 2 * rr) as i64;
        let mut col = Vec::with_capacity(top as usize + 1);
        for i in 0..=top {
            let bi = b_set(ctx, i64::from(i), &row.u, 0)?;
            let num = x.twist(i64::from(i))?.mul(&bi);
            col.push(num.div_scalar(&ell(ctx, i).pow(row.s), fj)?);
        }
        f.push(col);
    }
    let weak = vec![star; r.saturating_sub(1)];
    Ok(chain_sum(&f, &weak).truncate(floor))
}

/// The `Q_{U_i,s_i}` of every row, built once per array.
pub fn row_qs(ctx: &Arc<Context>, c: &CompositionArray) -> Result<Vec<QPolynomial>> {
    let mut cache: BTreeMap<(Vec<usize>, u32), QPolynomial> = BTreeMap::new();
    let mut out = Vec::new();
    for row in &c.rows {
        let key = (row.u.clone(), row.s);
        if !cache.contains_key(&key) {
            cache.insert(key.clone(), q_poly_interpolate(ctx, &row.u, row.s)?);
        }
        out.push(cache[&key].clone());
    }
    Ok(out)
}

/// Upper bound (numerator over `R`) for `log_q ‖S_d(U,N)‖`, from the shape of `Q`.
fn power_sum_bound(qp: &QPolynomial, d: u32) -> Result<i128> {
    let ctx = qp.ctx();
    let q = i128::from(ctx.qi());
    let rr = i128::from(ctx.r());
    let n = qp.u.len() as i128;
    let s = i128::from(qp.n);
    let qd = q.pow(d);
    let geo = (qd - 1) / (q - 1);
    let mut norm = qp.norm_scalar().norm_bound().unwrap_or(0) as i128;
    if !qp.u.is_empty() {
        norm += rr * n * (q.pow(qp.r) - 1) / (q - 1);
    }
    let den = i128::from(qp.norm_exp().upper().unwrap_or(0)) - i128::from(qp.qtilde.norm().upper().unwrap_or(0));
    let mut best: Option<i128> = None;
    for (k, ck) in qp.qtilde.t_coeffs().iter().enumerate() {
        if let Some(e) = ck.norm().upper() {
            let v = qd * (i128::from(e) + den) + rr * k as i128;
            best = Some(best.map_or(v, |b: i128| b.max(v)));
        }
    }
    let Some(best) = best else {
        return Ok(i128::MIN / 4);
    };
    let formula = rr * n * geo - rr * s * q * geo - norm + best;
    Ok(formula.min(-rr * i128::from(d) * s))
}

/// `ζ_C(𝒞)` known to `floor`, with the shell count chosen from the power-sum norm bounds.
pub fn zeta_deform(ctx: &Arc<Context>, c: &CompositionArray, floor: i64) -> Result<TateElement> {
    let qs = row_qs(ctx, c)?;
    zeta_with(ctx, c, &qs, floor)
}

pub fn zeta_with(ctx: &Arc<Context>, c: &CompositionArray, qs: &[QPolynomial], floor: i64) -> Result<TateElement> {
    let dmax = ctx.precision().d_max;
    let w = i128::from(floor);
    let rr = i128::from(ctx.r());
    let mut top = 0u32;
    loop {
        if power_sum_bound(&qs[0], top + 1)? < -w {
            break;
        }
        top += 1;
        if top + 2 > dmax {
            return Err(Error::PrecisionUnreachable(format!("ζ needs more than {dmax} shells for floor {floor}")));
        }
    }
    let top = top + 2;
    let fl = (w + 2 * rr) as i64;
    let mut f = Vec::new();
    for qp in qs {
        let mut col = Vec::new();
        for i in 0..=top {
            col.push(qp.power_sum(i, fl)?);
        }
        f.push(col);
    }
    let weak = vec![false; c.depth() - 1];
    Ok(chain_sum(&f, &weak).truncate(floor))
}

/// Partial sum of `ζ_C(𝒞)` over `i_1 ≤ top` using enumerated power sums.
pub fn zeta_partial_bruteforce_shells(ctx: &Arc<Context>, c: &CompositionArray, top: u32, floor: i64) -> Result<TateElement> {
    let mut f = Vec::new();
    for row in &c.rows {
        let mut col = Vec::new();
        for i in 0..=top {
            col.push(power_sum_bruteforce(ctx, &row.u, row.s, i, floor)?);
        }
        f.push(col);
    }
    let weak = vec![false; c.depth() - 1];
    Ok(chain_sum(&f, &weak).truncate(floor))
}

/// Partial sum of `ζ_C(𝒞)` over `i_1 ≤ top` computed via the power sums of `Q`.
pub fn zeta_partial_via_q(ctx: &Arc<Context>, c: &CompositionArray, top: u32, floor: i64) -> Result<TateElement> {
    let qs = row_qs(ctx, c)?;
    let mut f = Vec::new();
    for qp in &qs {
        let mut col = Vec::new();
        for i in 0..=top {
            col.push(qp.power_sum(i, floor)?);
        }
        f.push(col);
    }
    let weak = vec![false; c.depth() - 1];
    Ok(chain_sum(&f, &weak).truncate(floor))
}

/// Direct sum over tuples `(a_1, ..., a_r)` of monic polynomials with
/// `top ≥ deg a_1 > ... > deg a_r`, of `∏ σ_{U_i}(a_i)/a_i^{s_i}`.
pub fn zeta_tuple_enumeration(ctx: &Arc<Context>, c: &CompositionArray, top: u32, floor: i64) -> Result<TateElement> {
    let r = c.depth();
    let rr = ctx.r();
    // per row and degree, the list of single-polynomial terms
    let mut terms: Vec<Vec<Vec<TateElement>>> = Vec::new();
    for row in &c.rows {
        let mut by_deg = Vec::new();
        for d in 0..=top {
            let mut v = Vec::new();
            for a in apoly::monic(ctx, d)? {
                let mut x = TateElement::one(ctx);
                for &j in &row.u {
                    x = x.mul(&TateElement::poly_in_var(ctx, &a, j));
                }
                let inv = apoly::to_series(ctx, &a).pow(row.s).inv(floor + rr * i64::from(d) * 2 + 2 * rr)?;
                v.push(x.mul_scalar(&inv));
            }
            by_deg.push(v);
        }
        terms.push(by_deg);
    }
    let mut total = TateElement::zero(ctx);
    let mut degs = vec![0u32; r];
    fn rec(
        j: usize,
        max: i64,
        degs: &mut Vec<u32>,
        terms: &[Vec<Vec<TateElement>>],
        acc: &TateElement,
        total: &mut TateElement,
        floor: i64,
    ) {
        let r = terms.len();
        if j == r {
            *total = total.add(acc);
            return;
        }
        let lo = (r - j - 1) as i64;
        for d in lo..=max {
            degs[j] = d as u32;
            for x in &terms[j][d as usize] {
                let next = acc.mul(x).truncate(floor + 4 * acc.ctx().r());
                rec(j + 1, d - 1, degs, terms, &next, total, floor);
            }
        }
    }
    rec(0, i64::from(top), &mut degs, &terms, &TateElement::one(ctx), &mut total, floor);
    Ok(total.truncate(floor))
}

/// One term of the star decomposition: sign, merged array, merged point.
#[derive(Clone, Debug)]
pub struct StarTerm {
    pub sign: i32,
    pub array: CompositionArray,
    pub point: Vec<TateElement>,
}

/// All `2^{r-1}` symbol vectors: bit `k` set means rows `k+1` and `k+2` are merged by `+`.
#[must_use]
pub fn star_decompose(c: &CompositionArray, u: &[TateElement]) -> Vec<StarTerm> {
    let r = c.depth();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (r - 1)) {
        let mut rows: Vec<Row> = vec![c.rows[0].clone()];
        let mut pts: Vec<TateElement> = vec![u[0].clone()];
        for k in 1..r {
            if mask & (1 << (k - 1)) != 0 {
                let last = rows.last_mut().unwrap();
                last.u.extend(c.rows[k].u.iter().copied());
                last.u.sort_unstable();
                last.s += c.rows[k].s;
                let p = pts.last_mut().unwrap();
                *p = p.mul(&u[k]);
            } else {
                rows.push(c.rows[k].clone());
                pts.push(u[k].clone());
            }
        }
        let gamma = mask.count_ones() as i32;
        out.push(StarTerm { sign: if gamma % 2 == 0 { 1 } else { -1 }, array: CompositionArray { rows }, point: pts });
    }
    out
}

/// `Σ_v (-1)^{γ(v)} Li*_{v(𝒞)}(v^×(u))`.
pub fn li_via_star(ctx: &Arc<Context>, c: &CompositionArray, u: &[TateElement], floor: i64) -> Result<TateElement> {
    let mut total = TateElement::zero(ctx);
    for t in star_decompose(c, u) {
        let v = li(ctx, &t.array, &t.point, true, floor)?;
        total = total.add(&v.map_coeffs(|x| x.scale(ctx.sign(i64::from(t.sign < 0)))));
    }
    Ok(total.truncate(floor))
}

/// One term `a_i Li_𝒞(u_i)` of the polylogarithm expression.
#[derive(Clone, Debug)]
pub struct PolylogTerm {
    pub index: Vec<usize>,
    pub a_exp: u32,
    pub point: Vec<TateElement>,
}

#[derive(Clone, Debug)]
pub struct PolylogExpansion {
    pub array: CompositionArray,
    pub gamma: TateElement,
    pub qs: Vec<QPolynomial>,
    pub terms: Vec<PolylogTerm>,
}

impl PolylogExpansion {
    /// `a_i = θ^{j_1 + ... + j_r}`.
    #[must_use]
    pub fn a(&self, t: &PolylogTerm) -> RamifiedSeries {
        RamifiedSeries::theta_pow(self.gamma.ctx(), i64::from(t.a_exp))
    }
}

/// `Γ_𝒞 = ∏_{U_i ≠ ∅} ℓ_{r_i-1}^{q^{r_i}-s_i} b_{r_i}(U_i) · ∏_{U_i = ∅} Γ_{s_i}`.
pub fn gamma_c(ctx: &Arc<Context>, qs: &[QPolynomial]) -> Result<TateElement> {
    let mut g = TateElement::one(ctx);
    for qp in qs {
        g = g.mul_scalar(&qp.norm_scalar());
        if !qp.u.is_empty() {
            g = g.mul(&b_set(ctx, i64::from(qp.r), &qp.u, 0)?);
        }
    }
    Ok(g)
}

/// Floor to which the points `u_i` are expanded so that a target `floor` is reachable.
fn point_floor(ctx: &Arc<Context>, c: &CompositionArray, qs: &[QPolynomial], floor: i64) -> i64 {
    let q = ctx.qi();
    let extra: i64 = c
        .rows
        .iter()
        .zip(qs)
        .map(|(row, qp)| (i64::from(row.s) * q) / (q - 1) + 1 + i64::from(qp.t_degree()))
        .sum();
    floor + ctx.r() * (extra + 4)
}

pub fn polylog_expansion(ctx: &Arc<Context>, c: &CompositionArray, floor: i64) -> Result<PolylogExpansion> {
    let qs = row_qs(ctx, c)?;
    let pf = point_floor(ctx, c, &qs, floor);
    let coeffs: Vec<Vec<TateElement>> = qs.iter().map(|qp| qp.t_coeffs(pf)).collect::<Result<_>>()?;
    let mut terms = Vec::new();
    let sizes: Vec<usize> = coeffs.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    for mut idx in 0..total {
        let mut index = Vec::with_capacity(sizes.len());
        for &s in &sizes {
            index.push(idx % s);
            idx /= s;
        }
        let point: Vec<TateElement> = index.iter().zip(&coeffs).map(|(&j, col)| col[j].clone()).collect();
        if point.iter().any(TateElement::is_zero_known) {
            continue;
        }
        let a_exp = index.iter().sum::<usize>() as u32;
        terms.push(PolylogTerm { index, a_exp, point });
    }
    Ok(PolylogExpansion { array: c.clone(), gamma: gamma_c(ctx, &qs)?, qs, terms })
}

/// `Σ_i a_i Li_𝒞(u_i)`.
pub fn polylog_side(ctx: &Arc<Context>, data: &PolylogExpansion, floor: i64) -> Result<TateElement> {
    let mut total = TateElement::zero(ctx);
    let rr = ctx.r();
    for t in &data.terms {
        let v = li(ctx, &data.array, &t.point, false, floor + rr * i64::from(t.a_exp))?;
        total = total.add(&v.mul_scalar(&data.a(t)));
    }
    Ok(total.truncate(floor))
}

/// `Γ_𝒞 ζ_C(𝒞)`.
pub fn gamma_zeta(ctx: &Arc<Context>, data: &PolylogExpansion, floor: i64) -> Result<TateElement> {
    let g = data.gamma.norm().upper().unwrap_or(0).max(0);
    let z = zeta_with(ctx, &data.array, &data.qs, floor + g + ctx.r())?;
    Ok(data.gamma.mul(&z).truncate(floor))
}

/// Norm of `Γ_𝒞 ζ_C(𝒞) - Σ a_i Li_𝒞(u_i)` at working floor `floor`.
pub fn verify_polylog_expansion(ctx: &Arc<Context>, c: &CompositionArray, floor: i64) -> Result<(NormExp, PolylogExpansion)> {
    let data = polylog_expansion(ctx, c, floor)?;
    let lhs = gamma_zeta(ctx, &data, floor)?;
    let rhs = polylog_side(ctx, &data, floor)?;
    Ok((lhs.dist(&rhs), data))
}

/// Tuples `((-1)^{r-1} a_i, v(𝒞), v^×(u_i))` with zero components dropped; depth-1 tuples first.
#[derive(Clone, Debug)]
pub struct StarTuple {
    /// `a_l` as `sign · θ^{exp}`.
    pub sign: i32,
    pub a_exp: u32,
    pub array: CompositionArray,
    pub point: Vec<TateElement>,
}

#[must_use]
pub fn star_tuples(data: &PolylogExpansion) -> Vec<StarTuple> {
    let r = data.array.depth();
    let base = if (r - 1).is_multiple_of(2) { 1 } else { -1 };
    let mut out = Vec::new();
    for t in &data.terms {
        for st in star_decompose(&data.array, &t.point) {
            if st.point.iter().any(TateElement::is_zero_known) {
                continue;
            }
            out.push(StarTuple { sign: base, a_exp: t.a_exp, array: st.array, point: st.point });
        }
    }
    out.sort_by_key(|t| t.array.depth());
    out
}

/// `Σ_l a_l (-1)^{dep(𝒞_l)-1} Li*_{𝒞_l}(u_l)`.
pub fn star_form_rhs(ctx: &Arc<Context>, tuples: &[StarTuple], floor: i64) -> Result<TateElement> {
    let mut total = TateElement::zero(ctx);
    let rr = ctx.r();
    for t in tuples {
        let v = li(ctx, &t.array, &t.point, true, floor + rr * i64::from(t.a_exp))?;
        let sgn = i64::from(t.sign < 0) + (t.array.depth() as i64 - 1);
        let a = RamifiedSeries::monomial(ctx, ctx.sign(sgn), rr * i64::from(t.a_exp));
        total = total.add(&v.mul_scalar(&a));
    }
    Ok(total.truncate(floor))
}

/// Bindings `t_j ↦ ξ_j` for a Dirichlet–Goss specialization.
pub fn specialize_all(x: &TateElement, bindings: &[(usize, Fe)]) -> Result<TateElement> {
    let ctx = x.ctx().clone();
    let mut out = x.clone();
    for &(j, xi) in bindings {
        out = out.specialize(j, &RamifiedSeries::constant(&ctx, xi), None)?;
    }
    Ok(out)
}

/// `ζ_C(𝒞)` specialized at `t_j = ξ_j`; requires pairwise disjoint `U_i`.
pub fn lvalue_specialize(ctx: &Arc<Context>, c: &CompositionArray, bindings: &[(usize, Fe)], floor: i64) -> Result<TateElement> {
    if !c.disjoint() {
        return Err(Error::Rejected("U_i must be pairwise disjoint for a Dirichlet–Goss value".into()));
    }
    let z = zeta_deform(ctx, c, floor)?;
    specialize_all(&z, bindings)
}

/// Direct character sum `Σ_{top ≥ deg a_1 > ...} ∏ χ_i(a_i)/a_i^{s_i}` with
/// `χ_i(a) = ∏_{j∈U_i} a(ξ_j)`, plus a certified bound on the omitted shells.
pub fn lvalue_direct(
    ctx: &Arc<Context>,
    c: &CompositionArray,
    bindings: &[(usize, Fe)],
    top: u32,
    floor: i64,
) -> Result<(RamifiedSeries, i128)> {
    let r = c.depth();
    let rr = ctx.r();
    let xi = |j: usize| bindings.iter().find(|b| b.0 == j).map(|b| b.1);
    let mut f: Vec<Vec<TateElement>> = Vec::new();
    for row in &c.rows {
        let mut col = Vec::new();
        for d in 0..=top {
            let mut acc = RamifiedSeries::zero(ctx);
            for a in apoly::monic(ctx, d)? {
                let mut chi: Fe = 1;
                for &j in &row.u {
                    let x = xi(j).ok_or_else(|| Error::Config(format!("no binding for t_{j}")))?;
                    chi = ctx.mul(chi, ctx.eval_poly(&a, x));
                }
                if chi == 0 {
                    continue;
                }
                let inv = apoly::to_series(ctx, &a).pow(row.s).inv(floor + 2 * rr)?;
                acc = acc.add(&inv.scale(chi));
            }
            col.push(TateElement::scalar(&acc.truncate(floor + 2 * rr)));
        }
        f.push(col);
    }
    let weak = vec![false; r - 1];
    let v = chain_sum(&f, &weak).truncate(floor).constant_term();
    let qs = row_qs(ctx, c)?;
    let tail = power_sum_bound(&qs[0], top + 1)?;
    Ok((v, tail))
}

/// Gauss–Thakur sum `g = 𝔭'(ξ)^{-1} ω(ξ)`, with `ω = ω_{t-θ}` in the variable `t`.
pub fn gauss_thakur(ctx: &Arc<Context>, p: &[Fe], xi: Fe, floor: i64) -> Result<RamifiedSeries> {
    if !apoly::is_irreducible(ctx, p)? {
        return Err(Error::Rejected("𝔭 must be irreducible".into()));
    }
    if ctx.eval_poly(p, xi) != 0 {
        return Err(Error::Rejected("ξ is not a root of 𝔭".into()));
    }
    let dp = apoly::derivative(ctx, p);
    let dxi = ctx.eval_poly(&dp, xi);
    let dinv = ctx.inv(dxi).ok_or_else(|| Error::Rejected("𝔭'(ξ) = 0".into()))?;
    let om = omega_t(ctx, floor)?;
    let v = om.specialize(0, &RamifiedSeries::constant(ctx, xi), None)?.constant_term();
    Ok(v.scale(dinv))
}

/// `ω = (-θ)^{1/(q-1)} ∏_{i≥0}(1 - t/θ^{q^i})^{-1}` known to `floor`.
pub fn omega_t(ctx: &Arc<Context>, floor: i64) -> Result<TateElement> {
    omega_beta(&TateElement::linear(ctx, 0, &RamifiedSeries::theta_pow(ctx, 1)), floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx(p: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_zeta_one_first_shells() {
        // ζ(1) partial sums over d ≤ 2 at q = 2: 1 + 1/(θ^2+θ) + 1/ℓ_2
        let k = ctx(2);
        let w = k.vnum(30);
        let c = CompositionArray::new(vec![(vec![], 1)]).unwrap();
        let z = zeta_partial_bruteforce_shells(&k, &c, 2, w).unwrap();
        let expect = RamifiedSeries::one(&k)
            .add(&RamifiedSeries::one(&k).div(&ell(&k, 1), w).unwrap())
            .add(&RamifiedSeries::one(&k).div(&ell(&k, 2), w).unwrap());
        assert!(z.constant_term().agrees(&expect, w));
    }

    #[test]
    fn test_star_decompose_shapes() {
        let k = ctx(2);
        let c = CompositionArray::new(vec![(vec![1], 1), (vec![2], 2), (vec![3], 1), (vec![], 3)]).unwrap();
        let u: Vec<TateElement> = (0..4).map(|_| TateElement::one(&k)).collect();
        let terms = star_decompose(&c, &u);
        assert_eq!(terms.len(), 8);
        // v = (',', '+', ',')
        let t = &terms[0b010];
        assert_eq!(t.array.to_string(), "(({1},{2,3},{});(1,3,3))");
        assert_eq!(t.sign, -1);
        let single = CompositionArray::new(vec![(vec![1], 2)]).unwrap();
        assert_eq!(star_decompose(&single, &u[..1]).len(), 1);
    }

    #[test]
    fn test_carlitz_polylog_depth_one() {
        // Li_{(∅;n)}(z) = Σ z^{q^i}/ℓ_i^n
        let k = ctx(3);
        let w = k.vnum(20);
        let c = CompositionArray::new(vec![(vec![], 2)]).unwrap();
        let z = TateElement::scalar(&RamifiedSeries::theta_pow(&k, 1));
        let v = li(&k, &c, std::slice::from_ref(&z), false, w).unwrap();
        let mut expect = RamifiedSeries::zero(&k);
        for i in 0..4 {
            let num = RamifiedSeries::theta_pow(&k, 3i64.pow(i));
            expect = expect.add(&num.div(&ell(&k, i).pow(2), w).unwrap());
        }
        assert!(v.constant_term().agrees(&expect, w));
    }

    #[test]
    fn test_gauss_thakur_at_theta() {
        let k = ctx(2);
        let g = gauss_thakur(&k, &[0, 1], 0, k.vnum(20)).unwrap();
        assert_eq!(g.truncate(k.vnum(20)), RamifiedSeries::theta_pow(&k, 1).truncate(k.vnum(20)));
    }
}
