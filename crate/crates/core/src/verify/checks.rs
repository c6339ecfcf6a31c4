//! The named identity checks.
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{holonomy_generators, CurvTensor, EnumerationMode, Geometry};
use crate::error::Result;
use crate::liealg::{
    decompose_parabolic, equal_span, gram_eta, pr_so_n, so_check, span_lie_closure,
    weak_irreducibility_probe, Frame,
};
use crate::matrix::RatMatrix;
use crate::metric::poly_matmul;
use crate::oracle::{
    agrees, fd_christoffel, fd_convergence, fd_riemann, loop_transport, Convergence, FloatPoint,
    LoopSettings,
};
use crate::poly::Poly;
use crate::rational::{binomial, factorial, format_rational, int, rat, to_f64, Rational};

use super::report::{CheckResult, Status, Witness};
use super::Ctx;

const WITNESS_CAP: usize = 10;

#[derive(Default)]
pub(crate) struct Tally {
    witnesses: Vec<Witness>,
    failures: usize,
    detail: String,
    heuristic: bool,
}

impl Tally {
    /// Records a failure at 1-based `indices`.
    fn fail(&mut self, indices: Vec<usize>, expected: impl ToString, actual: impl ToString) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness {
                indices,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    /// Records a failure at 0-based tensor indices.
    fn fail_at(&mut self, idx: &[usize], expected: impl ToString, actual: impl ToString) {
        self.fail(idx.iter().map(|i| i + 1).collect(), expected, actual);
    }

    fn expect_poly(&mut self, idx: &[usize], expected: &Poly, actual: &Poly) {
        if expected != actual {
            self.fail_at(idx, expected, actual);
        }
    }

    fn expect_zero(&mut self, idx: &[usize], actual: &Poly) {
        if !actual.is_zero() {
            self.fail_at(idx, "0", actual);
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&text.into());
    }

    pub(crate) fn finish(self, name: &str, location: &str, millis: Option<u64>) -> CheckResult {
        let status = if self.failures > 0 {
            Status::Fail
        } else if self.heuristic {
            Status::HeuristicPass
        } else {
            Status::Pass
        };
        CheckResult {
            name: name.to_string(),
            status,
            location: location.to_string(),
            detail: self.detail,
            witnesses: self.witnesses,
            failures: self.failures,
            millis,
        }
    }
}

pub(crate) struct CheckDef {
    pub name: &'static str,
    pub location: &'static str,
    pub applies: fn(&Ctx) -> bool,
    pub run: fn(&mut Ctx) -> Result<Tally>,
}

fn always(_: &Ctx) -> bool {
    true
}

fn exhaustive_only(ctx: &Ctx) -> bool {
    ctx.cfg.mode == EnumerationMode::Exhaustive
}

fn permutation_enabled(ctx: &Ctx) -> bool {
    ctx.cfg.permutation_check
}

macro_rules! check {
    ($name:literal, $loc:literal, $run:ident) => {
        check!($name, $loc, $run, always)
    };
    ($name:literal, $loc:literal, $run:ident, $applies:ident) => {
        CheckDef {
            name: $name,
            location: $loc,
            applies: $applies,
            run: $run,
        }
    };
}

pub(crate) const DEFINITIONS: &[CheckDef] = &[
    check!("metric.origin", "g_ab(0) = eta_ab", metric_origin),
    check!("metric.symmetric", "g_ab = g_ba", metric_symmetric),
    check!("metric.determinant", "det g = det eta, a nonzero constant", metric_determinant),
    check!("metric.inverse", "g g^-1 = g^-1 g = 1 with polynomial g^-1", metric_inverse),
    check!(
        "metric.independence",
        "g_ab does not depend on x^1, x^2, x^{n+4}",
        metric_independence
    ),
    check!("metric.degree", "deg g_ab <= max(N+1, 2)", metric_degree),
    check!("christoffel.e11", "G^i_{jk} = 0 (i, j, k middle)", christoffel_e11),
    check!("christoffel.e22", "G^i_{j,n+3} = 0", christoffel_e22),
    check!(
        "christoffel.e21",
        "G^i_{j,n+4} = A^i_{j alpha} (x^{n+3})^alpha",
        christoffel_e21
    ),
    check!("christoffel.e10", "G^{n+3}_{ab} = G^{n+4}_{ab} = 0", christoffel_e10),
    check!("christoffel.e20", "G^a_{1b} = G^a_{2b} = 0", christoffel_e20),
    check!(
        "christoffel.e25",
        "G^i_{n+3,n+3} = G^i_{n+4,n+4} = -x^i",
        christoffel_e25
    ),
    check!("christoffel.torsion_free", "G^a_{bc} = G^a_{cb}", christoffel_symmetric),
    check!(
        "connection.metric_compatible",
        "d_c g_ab - G^d_{ca} g_db - G^d_{cb} g_ad = 0",
        metric_compatible
    ),
    check!(
        "curvature.e50",
        "R^i_{j,n+3,n+4} = alpha A^i_{j alpha} (x^{n+3})^{alpha-1}; R^i_{jab} = 0 unless {a,b} = {n+3,n+4}",
        curvature_e50
    ),
    check!("curvature.e30", "R^{n+3}_{abc} = R^{n+4}_{abc} = 0", curvature_e30),
    check!(
        "curvature.e40",
        "R^a_{bcd} = 0 if 1 or 2 is among b, c, d",
        curvature_e40
    ),
    check!("curvature.e70", "R^1_{i,i,n+3} = 1", curvature_e70),
    check!("curvature.e60", "R^2_{i,i,n+4} = 1 at the origin", curvature_e60),
    check!(
        "curvature.e80",
        "R^1_{n+4,i,j} = -A^j_{i1} at the origin",
        curvature_e80
    ),
    check!("curvature.antisymmetry", "R^a_{bcd} = -R^a_{bdc}", curvature_antisymmetry),
    check!(
        "curvature.bianchi",
        "R^a_{bcd} + R^a_{cdb} + R^a_{dbc} = 0",
        curvature_bianchi
    ),
    check!(
        "lemma1.contraction",
        "contractions of G with R over any slot only see middle indices",
        lemma1_contraction
    ),
    check!(
        "lemma2.vanishing",
        "R^i_{jcd;f_1..f_r;1} = R^i_{jcd;f_1..f_r;2} = 0",
        lemma2_vanishing
    ),
    check!(
        "lemma3.e100",
        "d/dx^{n+4} R^i_{jbc;f_1..f_r} = 0",
        lemma3_e100
    ),
    check!("lemma3.i", "d/dx^k R^i_{jbc;f_1..f_r} = 0 (k middle)", lemma3_i),
    check!("lemma3.ii", "R^i_{jbc;f_1..f_r;k} = 0 (k middle)", lemma3_ii),
    check!(
        "lemma3.iii",
        "middle block R^*_{*bc;f_1..f_r} = 0 implies R^*_{*bc;f_1..f_r;f} = 0",
        lemma3_iii
    ),
    check!(
        "lemma3.e105",
        "R^i_{jbc;f_1..f_{r-1};k} = 0 for every earlier slot pattern (k middle)",
        lemma3_ii
    ),
    check!(
        "lemma3.e106",
        "R^i_{jbc;f_1..f_{r-1};n+3} = d/dx^{n+3} R^i_{jbc;f_1..f_{r-1}}",
        lemma3_e106
    ),
    check!(
        "lemma3.e107",
        "R^i_{jbc;..;n+4} = G^i_{n+4,l} R^l_{jbc;..} - G^l_{n+4,j} R^i_{lbc;..}",
        lemma3_e107
    ),
    check!(
        "pattern.e200",
        "R^i_{jbc;f_1..f_r} != 0 implies b, c, f_1..f_r in {n+3, n+4} and b != c",
        pattern_e200
    ),
    check!(
        "recursion.e110",
        "R^i_{j,n+3,n+4;..;n+3} = d/dx^{n+3} R^i_{j,n+3,n+4;..}",
        recursion_e110
    ),
    check!(
        "recursion.e111",
        "R^i_{j,n+3,n+4;..;n+4} = [G_{n+4}, R_{n+3,n+4;..}]^i_j",
        recursion_e111
    ),
    check!(
        "e130.factorial",
        "pr_so(n) nabla^{r-1} R(d_{n+3}, d_{n+4}; d_{n+3}; ..; d_{n+3})_0 = r! A_r, 1 <= r <= N",
        e130_factorial
    ),
    check!(
        "e130.beyond",
        "pr_so(n) nabla^N R(d_{n+3}, d_{n+4}; d_{n+3}; ..; d_{n+3})_0 = 0",
        e130_beyond
    ),
    check!(
        "e140.bracket",
        "pr nabla^r R(d_{n+3}, d_{n+4}; F; d_{n+4}; d_{n+3}^k)_0 = k! [A_k, pr nabla^{r0-1} R(d_{n+3}, d_{n+4}; F)_0], k = r - r0 >= 1",
        e140_bracket
    ),
    check!(
        "e140.leibniz",
        "pr nabla^r R(d_{n+3}, d_{n+4}; F; d_{n+4}; d_{n+3}^k)_0 = sum_j C(k,j) j! [A_j, pr nabla^{r0-1+k-j} R(d_{n+3}, d_{n+4}; F; d_{n+3}^{k-j})_0]",
        e140_leibniz
    ),
    check!(
        "operators.shape",
        "every origin operator lies in so(2,n+2) with B = 0",
        operators_shape
    ),
    check!(
        "holonomy.pruning",
        "every operator whose tuple contains 1 or 2 vanishes; pruned and full spans agree",
        holonomy_pruning,
        exhaustive_only
    ),
    check!(
        "holonomy.equality",
        "hol_0 = g^h, dim = N + 2n + 1",
        holonomy_equality
    ),
    check!(
        "irreducibility.probe",
        "no sampled invariant subspace is proper and nondegenerate",
        irreducibility_probe
    ),
    check!(
        "oracle.christoffel",
        "symbolic G^a_{bc} matches central differences at sample points",
        oracle_christoffel
    ),
    check!(
        "oracle.riemann",
        "symbolic R^a_{bcd} matches central differences at sample points",
        oracle_riemann
    ),
    check!(
        "oracle.convergence",
        "three-point error shrinks about 4x when h is halved",
        oracle_convergence
    ),
    check!(
        "oracle.loop_transport",
        "(1 - P)/eps^2 around a loop in the (n+3, n+4) plane matches R(d_{n+3}, d_{n+4})_0",
        oracle_loop_transport
    ),
    check!(
        "holonomy.permutation",
        "reordering the basis A_alpha leaves hol_0 unchanged",
        holonomy_permutation,
        permutation_enabled
    ),
];

// ---------------------------------------------------------------- helpers

fn frame(ctx: &Ctx) -> Frame {
    ctx.geo.frame()
}

fn nvars(ctx: &Ctx) -> usize {
    frame(ctx).dim()
}

/// `Σ_{α ≥ 1} c(α) A_α[i][j] (x^{n+3})^{α + shift}` for middle frame indices.
fn a_series(ctx: &Ctx, i: usize, j: usize, shift: i32, coeff: impl Fn(usize) -> Rational) -> Poly {
    let f = frame(ctx);
    let nv = nvars(ctx);
    let (mi, mj) = (i - f.e(0), j - f.e(0));
    let mut p = Poly::zero(nv);
    for alpha in 1..=ctx.spec.dim_h() {
        let a = ctx.spec.entry(mi, mj, alpha);
        if a.is_zero() {
            continue;
        }
        let power = (alpha as i32 + shift) as u32;
        let term = Poly::var_pow(nv, f.q1(), power)
            .expect("in range")
            .scale(&(a * coeff(alpha)));
        p += &term;
    }
    p
}

fn fmt_matrix(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(short_rational).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn short_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format_rational(v)
    }
}

fn middle_block_keys(t: &CurvTensor, f: &Frame) -> Vec<Vec<usize>> {
    t.nonzero()
        .filter(|(k, _)| f.is_middle(k[0] as usize) && f.is_middle(k[1] as usize))
        .map(|(k, _)| k.iter().map(|&i| i as usize).collect())
        .collect()
}

fn tuples(len: usize, alphabet: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                alphabet.iter().map(move |&s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// `pr_so(n)` of `∇^r R(∂_{n+3}, ∂_{n+4}; ∂_{f_1}; ..)_0`.
fn projected(geo: &Geometry, derivs: &[usize]) -> Result<RatMatrix> {
    let f = geo.frame();
    pr_so_n(&geo.operator_at_origin(f.q1(), f.q2(), derivs))
}

fn sample_points(ctx: &Ctx) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    rng.set_stream(1);
    let dim = nvars(ctx);
    (0..ctx.cfg.oracle.sample_points)
        .map(|_| (0..dim).map(|_| rat(rng.gen_range(-8..=8), 8)).collect())
        .collect()
}

fn det_rational(m: &RatMatrix) -> Rational {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let v = &factor * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

// ---------------------------------------------------------------- metric

fn metric_origin(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let eta = gram_eta(ctx.spec.n()).gram;
    let g0 = ctx.geo.metric.at_origin();
    for a in 0..eta.rows() {
        for b in 0..eta.cols() {
            if g0[(a, b)] != eta[(a, b)] {
                t.fail_at(
                    &[a, b],
                    short_rational(&eta[(a, b)]),
                    short_rational(&g0[(a, b)]),
                );
            }
        }
    }
    Ok(t)
}

fn metric_symmetric(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let g = &ctx.geo.metric.g;
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            t.expect_poly(&[a, b], &g[b][a], &g[a][b]);
        }
    }
    Ok(t)
}

fn metric_determinant(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let expected = det_rational(&gram_eta(ctx.spec.n()).gram);
    let det = &ctx.geo.inverse.determinant;
    if *det != expected {
        t.fail(vec![], short_rational(&expected), short_rational(det));
    }
    // Independent route: exact elimination of g evaluated at rational points.
    let g = &ctx.geo.metric.g;
    let dim = g.len();
    let mut points = vec![vec![Rational::zero(); dim]];
    points.extend(sample_points(ctx));
    for (k, x) in points.iter().enumerate() {
        let mut m = RatMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                m[(a, b)] = g[a][b].eval(x)?;
            }
        }
        let d = det_rational(&m);
        if d != expected {
            t.fail(vec![k], short_rational(&expected), short_rational(&d));
        }
    }
    t.note(format!(
        "det = {}; evaluated at the origin and {} sample points",
        short_rational(det),
        points.len() - 1
    ));
    Ok(t)
}

fn metric_inverse(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let g = &ctx.geo.metric.g;
    let inv = &ctx.geo.inverse.inverse;
    let nv = nvars(ctx);
    for prod in [poly_matmul(g, inv), poly_matmul(inv, g)] {
        for a in 0..prod.len() {
            for b in 0..prod.len() {
                let expected = if a == b {
                    Poly::one(nv)
                } else {
                    Poly::zero(nv)
                };
                t.expect_poly(&[a, b], &expected, &prod[a][b]);
            }
        }
    }
    Ok(t)
}

fn metric_independence(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let g = &ctx.geo.metric.g;
    for v in [f.p1(), f.p2(), f.q2()] {
        for a in 0..g.len() {
            for b in a..g.len() {
                t.expect_zero(&[a, b, v], &g[a][b].partial(v)?);
            }
        }
    }
    Ok(t)
}

fn metric_degree(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let bound = (ctx.spec.dim_h() as u32 + 1).max(2);
    let deg = ctx.geo.metric.max_degree();
    if deg > bound {
        t.fail(vec![], format!("<= {bound}"), deg);
    }
    t.note(format!("max degree {deg}, bound {bound}"));
    Ok(t)
}

// ---------------------------------------------------------------- connection

fn christoffel_e11(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for i in f.middle() {
        for j in f.middle() {
            for k in f.middle() {
                t.expect_zero(&[i, j, k], ctx.geo.gamma.get(i, j, k));
            }
        }
    }
    Ok(t)
}

fn christoffel_e22(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for i in f.middle() {
        for j in f.middle() {
            t.expect_zero(&[i, j, f.q1()], ctx.geo.gamma.get(i, j, f.q1()));
        }
    }
    Ok(t)
}

fn christoffel_e21(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for i in f.middle() {
        for j in f.middle() {
            let expected = a_series(ctx, i, j, 0, |_| Rational::one());
            t.expect_poly(&[i, j, f.q2()], &expected, ctx.geo.gamma.get(i, j, f.q2()));
        }
    }
    Ok(t)
}

fn christoffel_e10(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for a in [f.q1(), f.q2()] {
        for b in 0..f.dim() {
            for c in 0..f.dim() {
                t.expect_zero(&[a, b, c], ctx.geo.gamma.get(a, b, c));
            }
        }
    }
    Ok(t)
}

fn christoffel_e20(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for a in 0..f.dim() {
        for b in [f.p1(), f.p2()] {
            for c in 0..f.dim() {
                t.expect_zero(&[a, b, c], ctx.geo.gamma.get(a, b, c));
            }
        }
    }
    Ok(t)
}

fn christoffel_e25(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for i in f.middle() {
        let expected = -&Poly::var(nvars(ctx), i)?;
        for q in [f.q1(), f.q2()] {
            t.expect_poly(&[i, q, q], &expected, ctx.geo.gamma.get(i, q, q));
        }
    }
    Ok(t)
}

fn christoffel_symmetric(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let dim = nvars(ctx);
    let g = &ctx.geo.gamma;
    for a in 0..dim {
        for b in 0..dim {
            for c in b + 1..dim {
                t.expect_poly(&[a, b, c], g.get(a, c, b), g.get(a, b, c));
            }
        }
    }
    Ok(t)
}

fn metric_compatible(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let dim = nvars(ctx);
    let g = &ctx.geo.metric.g;
    let gamma = &ctx.geo.gamma;
    for c in 0..dim {
        for a in 0..dim {
            for b in a..dim {
                let mut v = g[a][b].partial(c)?;
                for d in 0..dim {
                    let l = gamma.get(d, c, a);
                    if !l.is_zero() && !g[d][b].is_zero() {
                        v -= &(l * &g[d][b]);
                    }
                    let r = gamma.get(d, c, b);
                    if !r.is_zero() && !g[a][d].is_zero() {
                        v -= &(r * &g[a][d]);
                    }
                }
                t.expect_zero(&[a, b, c], &v);
            }
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------- curvature

fn curvature_e50(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let r = ctx.geo.curvature(0);
    let nv = nvars(ctx);
    for i in f.middle() {
        for j in f.middle() {
            let main = a_series(ctx, i, j, -1, |alpha| int(alpha as i64));
            for c in 0..f.dim() {
                for d in 0..f.dim() {
                    let expected = if (c, d) == (f.q1(), f.q2()) {
                        main.clone()
                    } else if (c, d) == (f.q2(), f.q1()) {
                        -&main
                    } else {
                        Poly::zero(nv)
                    };
                    t.expect_poly(&[i, j, c, d], &expected, r.get(&[i, j, c, d]));
                }
            }
        }
    }
    Ok(t)
}

fn curvature_e30(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for (k, p) in ctx.geo.curvature(0).nonzero() {
        let a = k[0] as usize;
        if a == f.q1() || a == f.q2() {
            let idx: Vec<usize> = k.iter().map(|&i| i as usize).collect();
            t.fail_at(&idx, "0", p);
        }
    }
    Ok(t)
}

fn curvature_e40(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for (k, p) in ctx.geo.curvature(0).nonzero() {
        if k[1..]
            .iter()
            .any(|&i| i as usize == f.p1() || i as usize == f.p2())
        {
            let idx: Vec<usize> = k.iter().map(|&i| i as usize).collect();
            t.fail_at(&idx, "0", p);
        }
    }
    Ok(t)
}

fn curvature_e70(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let one = Poly::one(nvars(ctx));
    for i in f.middle() {
        let idx = [f.p1(), i, i, f.q1()];
        t.expect_poly(&idx, &one, ctx.geo.curvature(0).get(&idx));
    }
    Ok(t)
}

fn curvature_e60(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for i in f.middle() {
        let idx = [f.p2(), i, i, f.q2()];
        let p = ctx.geo.curvature(0).get(&idx);
        let v = p.eval_origin();
        if !v.is_one() {
            t.fail_at(&idx, "1", short_rational(&v));
        }
        if i == f.e(0) {
            t.note(format!("R^2_{{3,3,n+4}} = {p}"));
        }
    }
    Ok(t)
}

fn curvature_e80(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let a1 = ctx.spec.basis_or_zero(1);
    for i in f.middle() {
        for j in f.middle() {
            let idx = [f.p1(), f.q2(), i, j];
            let expected = -a1[(j - f.e(0), i - f.e(0))].clone();
            let v = ctx.geo.curvature(0).get(&idx).eval_origin();
            if v != expected {
                t.fail_at(&idx, short_rational(&expected), short_rational(&v));
            }
        }
    }
    let sample = ctx
        .geo
        .curvature(0)
        .get(&[f.p1(), f.q2(), f.e(0), f.e(f.n - 1)]);
    t.note(format!("R^1_{{n+4,3,n+2}} = {sample}"));
    Ok(t)
}

fn curvature_antisymmetry(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let r = ctx.geo.curvature(0);
    for (k, p) in r.nonzero() {
        let (a, b, c, d) = (k[0] as usize, k[1] as usize, k[2] as usize, k[3] as usize);
        let swapped = r.get(&[a, b, d, c]);
        if &(-p) != swapped {
            t.fail_at(&[a, b, c, d], -p, swapped);
        }
    }
    Ok(t)
}

fn curvature_bianchi(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let r = ctx.geo.curvature(0);
    let mut seen = BTreeSet::new();
    for (k, _) in r.nonzero() {
        let (a, b, c, d) = (k[0] as usize, k[1] as usize, k[2] as usize, k[3] as usize);
        // cyclic sums agree on rotations of (b, c, d); test each orbit once
        let orbit = [(b, c, d), (c, d, b), (d, b, c)];
        let rep = *orbit.iter().min().expect("nonempty");
        if !seen.insert((a, rep)) {
            continue;
        }
        let s = &(r.get(&[a, b, c, d]) + r.get(&[a, c, d, b])) + r.get(&[a, d, b, c]);
        t.expect_zero(&[a, b, c, d], &s);
    }
    Ok(t)
}

// ---------------------------------------------------------------- lemmas

fn lemma1_contraction(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let dim = f.dim();
    let gamma = &ctx.geo.gamma;
    let r = ctx.geo.curvature(0);
    let nv = nvars(ctx);

    // Γ^a_{b f} keyed by f, and Γ^f_{b a} keyed by f.
    let mut by_last: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dim];
    let mut by_upper: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dim];
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                if !gamma.get(a, b, c).is_zero() {
                    by_last[c].push((a, b));
                    by_upper[a].push((b, c));
                }
            }
        }
    }

    for slot in 0..4 {
        // (full sum, middle-only sum) keyed by the free indices
        let mut sums: BTreeMap<Vec<usize>, (Poly, Poly)> = BTreeMap::new();
        for (k, rp) in r.nonzero() {
            let k: Vec<usize> = k.iter().map(|&i| i as usize).collect();
            let contracted = k[slot];
            let pairs = if slot == 0 {
                &by_last[contracted]
            } else {
                &by_upper[contracted]
            };
            for &(x, y) in pairs {
                let gp = if slot == 0 {
                    gamma.get(x, y, contracted)
                } else {
                    gamma.get(contracted, x, y)
                };
                let term = gp * rp;
                let mut key = vec![slot, x, y];
                key.extend(
                    k.iter()
                        .enumerate()
                        .filter(|&(s, _)| s != slot)
                        .map(|(_, &v)| v),
                );
                let e = sums
                    .entry(key)
                    .or_insert_with(|| (Poly::zero(nv), Poly::zero(nv)));
                e.0 += &term;
                if f.is_middle(contracted) {
                    e.1 += &term;
                }
            }
        }
        for (key, (full, middle)) in &sums {
            if full != middle {
                t.fail(key.iter().map(|v| v + 1).collect(), middle, full);
            }
        }
    }
    t.note("witness indices: (slot, free indices..), slot 1 is the upper index");
    Ok(t)
}

fn lemma2_vanishing(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for r in 1..=ctx.max_order {
        let tensor = ctx.geo.curvature(r);
        for k in middle_block_keys(tensor, &f) {
            let last = *k.last().expect("order >= 1");
            if last == f.p1() || last == f.p2() {
                t.fail_at(&k, "0", tensor.get(&k));
            }
        }
    }
    Ok(t)
}

fn middle_partials(ctx: &Ctx, vars: &[usize]) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for r in 0..=ctx.max_order {
        let tensor = ctx.geo.curvature(r);
        for k in middle_block_keys(tensor, &f) {
            for &v in vars {
                let d = tensor.get(&k).partial(v)?;
                if !d.is_zero() {
                    let mut idx = k.clone();
                    idx.push(v);
                    t.fail_at(&idx, "0", d);
                }
            }
        }
    }
    Ok(t)
}

fn lemma3_e100(ctx: &mut Ctx) -> Result<Tally> {
    let q2 = frame(ctx).q2();
    middle_partials(ctx, &[q2])
}

fn lemma3_i(ctx: &mut Ctx) -> Result<Tally> {
    let vars: Vec<usize> = frame(ctx).middle().collect();
    middle_partials(ctx, &vars)
}

fn lemma3_ii(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    for r in 1..=ctx.max_order {
        let tensor = ctx.geo.curvature(r);
        for k in middle_block_keys(tensor, &f) {
            if f.is_middle(*k.last().expect("order >= 1")) {
                t.fail_at(&k, "0", tensor.get(&k));
            }
        }
    }
    Ok(t)
}

/// Block reading: for fixed `(b, c, f_1..f_r)`, a vanishing middle block
/// `R^î_{ĵ b c; f_1..f_r}` forces the whole extended block to vanish.
fn lemma3_iii(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let mut nonzero: BTreeSet<Vec<usize>> = middle_block_keys(ctx.geo.curvature(0), &f)
        .into_iter()
        .map(|k| k[2..].to_vec())
        .collect();
    for r in 1..=ctx.max_order {
        let tensor = ctx.geo.curvature(r);
        let keys = middle_block_keys(tensor, &f);
        for k in &keys {
            if !nonzero.contains(&k[2..k.len() - 1]) {
                t.fail_at(k, "0", tensor.get(k));
            }
        }
        nonzero = keys.into_iter().map(|k| k[2..].to_vec()).collect();
    }
    Ok(t)
}

/// Tails `(b, c, f_1..f_r)` carrying a nonzero middle-block component at
/// order `r` or, extended by `dir`, at order `r + 1`.
fn recursion_tails(ctx: &Ctx, r: usize, dir: usize, plane_only: bool) -> BTreeSet<Vec<usize>> {
    let f = frame(ctx);
    let mut tails = BTreeSet::new();
    for k in middle_block_keys(ctx.geo.curvature(r), &f) {
        tails.insert(k[2..].to_vec());
    }
    for k in middle_block_keys(ctx.geo.curvature(r + 1), &f) {
        if *k.last().expect("order >= 1") == dir {
            tails.insert(k[2..k.len() - 1].to_vec());
        }
    }
    if plane_only {
        tails.retain(|tail| tail[0] == f.q1() && tail[1] == f.q2());
    }
    tails
}

fn recursion_check(ctx: &Ctx, dir: usize, plane_only: bool) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let nv = nvars(ctx);
    let gamma = &ctx.geo.gamma;
    let mut compared = 0usize;
    for r in 0..ctx.max_order {
        let parent = ctx.geo.curvature(r);
        let child = ctx.geo.curvature(r + 1);
        for tail in recursion_tails(ctx, r, dir, plane_only) {
            for i in f.middle() {
                for j in f.middle() {
                    let mut key = vec![i, j];
                    key.extend_from_slice(&tail);
                    let expected = if dir == f.q1() {
                        parent.get(&key).partial(dir)?
                    } else {
                        let mut s = Poly::zero(nv);
                        for l in f.middle() {
                            let mut kl = key.clone();
                            kl[0] = l;
                            let g = gamma.get(i, dir, l);
                            if !g.is_zero() {
                                s += &(g * parent.get(&kl));
                            }
                            kl[0] = i;
                            kl[1] = l;
                            let g = gamma.get(l, dir, j);
                            if !g.is_zero() {
                                s -= &(g * parent.get(&kl));
                            }
                        }
                        s
                    };
                    key.push(dir);
                    t.expect_poly(&key, &expected, child.get(&key));
                    compared += 1;
                }
            }
        }
    }
    t.note(format!("{compared} components compared"));
    Ok(t)
}

fn lemma3_e106(ctx: &mut Ctx) -> Result<Tally> {
    recursion_check(ctx, frame(ctx).q1(), false)
}

fn lemma3_e107(ctx: &mut Ctx) -> Result<Tally> {
    recursion_check(ctx, frame(ctx).q2(), false)
}

fn recursion_e110(ctx: &mut Ctx) -> Result<Tally> {
    recursion_check(ctx, frame(ctx).q1(), true)
}

fn recursion_e111(ctx: &mut Ctx) -> Result<Tally> {
    recursion_check(ctx, frame(ctx).q2(), true)
}

fn pattern_e200(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let mut nonzero = 0;
    for r in 0..=ctx.max_order {
        let tensor = ctx.geo.curvature(r);
        for k in middle_block_keys(tensor, &f) {
            nonzero += 1;
            let in_plane = k[2..].iter().all(|&i| i == f.q1() || i == f.q2());
            if !in_plane || k[2] == k[3] {
                t.fail_at(&k, "0", tensor.get(&k));
            }
        }
    }
    t.note(format!(
        "{nonzero} nonzero middle-block components up to order {}",
        ctx.max_order
    ));
    Ok(t)
}

// ---------------------------------------------------------------- key formulas

fn e130_factorial(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let q1 = frame(ctx).q1();
    let top = ctx.spec.dim_h().min(ctx.max_order + 1);
    for r in 1..=top {
        let p = projected(&ctx.geo, &vec![q1; r - 1])?;
        let expected = ctx.spec.basis_or_zero(r).scale(&factorial(r));
        if p != expected {
            t.fail(vec![r], fmt_matrix(&expected), fmt_matrix(&p));
        }
    }
    t.note(format!("r = 1..{top}"));
    Ok(t)
}

fn e130_beyond(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let q1 = frame(ctx).q1();
    let r = ctx.spec.dim_h() + 1;
    if r - 1 <= ctx.max_order {
        let p = projected(&ctx.geo, &vec![q1; r - 1])?;
        if !p.is_zero() {
            t.fail(vec![r], "0", fmt_matrix(&p));
        }
        t.note(format!("r = {r}"));
    } else {
        t.note(format!("r = {r} exceeds max order {}", ctx.max_order));
    }
    Ok(t)
}

/// `(r0, r, F)` with `f_{r0} = n+4`, `F = (f_1..f_{r0-1}) ∈ {n+3, n+4}`.
fn bracket_cases(ctx: &Ctx, strict: bool) -> Vec<(usize, usize, Vec<usize>)> {
    let f = frame(ctx);
    let mut out = Vec::new();
    for r in 1..=ctx.max_order {
        for r0 in 1..=r {
            if strict && r0 == r {
                continue;
            }
            for prefix in tuples(r0 - 1, &[f.q1(), f.q2()]) {
                out.push((r0, r, prefix));
            }
        }
    }
    out
}

fn bracket_lhs(ctx: &Ctx, r0: usize, r: usize, prefix: &[usize]) -> Result<RatMatrix> {
    let f = frame(ctx);
    let mut derivs = prefix.to_vec();
    derivs.push(f.q2());
    derivs.extend(std::iter::repeat_n(f.q1(), r - r0));
    projected(&ctx.geo, &derivs)
}

fn bracket_label(r0: usize, r: usize, prefix: &[usize]) -> Vec<usize> {
    let mut v = vec![r0, r];
    v.extend(prefix.iter().map(|i| i + 1));
    v
}

fn e140_bracket(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let cases = bracket_cases(ctx, true);
    for (r0, r, prefix) in &cases {
        let k = r - r0;
        let lhs = bracket_lhs(ctx, *r0, *r, prefix)?;
        let inner = projected(&ctx.geo, prefix)?;
        let rhs = ctx
            .spec
            .basis_or_zero(k)
            .commutator(&inner)?
            .scale(&factorial(k));
        if lhs != rhs {
            t.fail(
                bracket_label(*r0, *r, prefix),
                fmt_matrix(&rhs),
                fmt_matrix(&lhs),
            );
        }
    }
    t.note(format!(
        "{} cases (r0 < r <= {}); witness indices: (r0, r, f_1..f_{{r0-1}})",
        cases.len(),
        ctx.max_order
    ));
    Ok(t)
}

fn e140_leibniz(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let q1 = frame(ctx).q1();
    let n = ctx.spec.n();
    let cases = bracket_cases(ctx, false);
    for (r0, r, prefix) in &cases {
        let k = r - r0;
        let lhs = bracket_lhs(ctx, *r0, *r, prefix)?;
        let mut rhs = RatMatrix::zeros(n, n);
        for j in 1..=k.min(ctx.spec.dim_h()) {
            let mut derivs = prefix.clone();
            derivs.extend(std::iter::repeat_n(q1, k - j));
            let inner = projected(&ctx.geo, &derivs)?;
            let term = ctx
                .spec
                .basis_or_zero(j)
                .commutator(&inner)?
                .scale(&(binomial(k, j) * factorial(j)));
            rhs = rhs.checked_add(&term)?;
        }
        if lhs != rhs {
            t.fail(
                bracket_label(*r0, *r, prefix),
                fmt_matrix(&rhs),
                fmt_matrix(&lhs),
            );
        }
    }
    t.note(format!(
        "{} cases (r0 <= r <= {}); witness indices: (r0, r, f_1..f_{{r0-1}})",
        cases.len(),
        ctx.max_order
    ));
    Ok(t)
}

// ---------------------------------------------------------------- holonomy

fn operators_shape(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let eta = gram_eta(ctx.spec.n());
    let hol = ctx.holonomy()?;
    let gens = &hol.generators;
    let all = gens.generators.iter().chain(&gens.outside_pruned);
    let mut count = 0;
    for g in all {
        count += 1;
        if !so_check(&g.matrix, &eta)? {
            t.fail(g.label(), "so(2,n+2)", fmt_matrix(&g.matrix));
            continue;
        }
        match decompose_parabolic(&g.matrix) {
            Ok(p) if p.b.is_zero() => {}
            Ok(p) => t.fail(g.label(), "B = 0", format!("B = {}", fmt_matrix(&p.b))),
            Err(e) => t.fail(g.label(), "stabilizer pattern", e),
        }
    }
    t.note(format!("{count} nonzero operators"));
    Ok(t)
}

fn holonomy_pruning(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let dim = nvars(ctx);
    let pruned = holonomy_generators(&ctx.geo, ctx.max_order, EnumerationMode::Pruned);
    let pruned_span = span_lie_closure(dim, pruned.matrices())?;
    let hol = ctx.holonomy()?;
    for g in &hol.generators.outside_pruned {
        t.fail(g.label(), "0", fmt_matrix(&g.matrix));
    }
    if !equal_span(&pruned_span, &hol.span) {
        t.fail(
            vec![],
            format!("dim {}", hol.span.dim()),
            format!("dim {}", pruned_span.dim()),
        );
    }
    t.note(format!(
        "{} tuples visited, {} nonzero operators outside the pruned set",
        hol.generators.tuples_visited,
        hol.generators.outside_pruned.len()
    ));
    Ok(t)
}

fn holonomy_equality(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let expected_dim = ctx.spec.dim_h() + 2 * ctx.spec.n() + 1;
    let hol = ctx.holonomy()?;
    if hol.expected.dim() != expected_dim {
        t.fail(
            vec![],
            format!("dim g^h = {expected_dim}"),
            hol.expected.dim(),
        );
    }
    if !hol.equal {
        t.fail(
            vec![],
            format!("dim {}", hol.expected.dim()),
            format!("dim {} (deficit {})", hol.span.dim(), hol.deficit),
        );
        for a in &hol.missing_directions {
            t.fail(vec![], fmt_matrix(a), "missing from pr_so(n)(hol_0)");
        }
    }
    t.note(format!(
        "dim hol_0 = {}, dim g^h = {}, {} generators",
        hol.span.dim(),
        hol.expected.dim(),
        hol.generators.generators.len()
    ));
    Ok(t)
}

fn irreducibility_probe(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let eta = gram_eta(ctx.spec.n());
    let dim = nvars(ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    rng.set_stream(2);
    let samples: Vec<Vec<Rational>> = (0..ctx.cfg.probe_samples)
        .map(|_| {
            (0..dim)
                .map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=4)))
                .collect()
        })
        .collect();
    let hol = ctx.holonomy()?;
    let report = weak_irreducibility_probe(&hol.span, &eta, &samples)?;
    if !report.plane_invariant {
        t.fail(vec![], "span{p1,p2} invariant", "not invariant");
    }
    if !report.plane_isotropic {
        t.fail(vec![], "span{p1,p2} isotropic", "not isotropic");
    }
    if let Some(cx) = &report.counterexample {
        let rows: Vec<String> = cx.iter().map(|r| format!("[{}]", r.join(","))).collect();
        t.fail(
            vec![],
            "no proper nondegenerate invariant subspace",
            rows.join(","),
        );
    }
    t.heuristic = true;
    t.note(format!(
        "{} starting vectors; sampling can refute but not prove",
        report.samples.len()
    ));
    Ok(t)
}

fn holonomy_permutation(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let nh = ctx.spec.dim_h();
    let order: Vec<usize> = (0..nh).rev().collect();
    let permuted = ctx.spec.permuted(&order)?;
    let geo = Geometry::build_with(&permuted, ctx.max_order, ctx.cfg.metric_options())?;
    let other = crate::curvature::holonomy_algebra(&geo, ctx.max_order, ctx.cfg.mode)?;
    let metric_changed = geo.metric.g != ctx.geo.metric.g;
    let hol = ctx.holonomy()?;
    if !equal_span(&hol.span, &other.span) {
        t.fail(
            vec![],
            format!("dim {}", hol.span.dim()),
            format!("dim {}", other.span.dim()),
        );
    }
    t.note(format!(
        "basis reversed; metric {}",
        if metric_changed {
            "changed"
        } else {
            "unchanged"
        }
    ));
    Ok(t)
}

// ---------------------------------------------------------------- oracle

fn float_point(ctx: &Ctx, x: &[Rational]) -> Result<FloatPoint> {
    FloatPoint::new(
        x.iter().map(to_f64).collect(),
        ctx.cfg.oracle.h,
        ctx.cfg.oracle.tolerance,
    )
}

fn exact_riemann(ctx: &Ctx, x: &[Rational]) -> Result<Vec<f64>> {
    let dim = nvars(ctx);
    let mut out = vec![0.0; dim * dim * dim * dim];
    for (k, p) in ctx.geo.curvature(0).nonzero() {
        let flat = k.iter().fold(0, |acc, &i| acc * dim + i as usize);
        out[flat] = to_f64(&p.eval(x)?);
    }
    Ok(out)
}

fn unflatten(mut flat: usize, dim: usize, len: usize) -> Vec<usize> {
    let mut idx = vec![0; len];
    for slot in (0..len).rev() {
        idx[slot] = flat % dim;
        flat /= dim;
    }
    idx
}

fn oracle_christoffel(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let dim = nvars(ctx);
    let tol = ctx.cfg.oracle.tolerance;
    let points = sample_points(ctx);
    for x in &points {
        let numeric = fd_christoffel(&ctx.spec, &float_point(ctx, x)?)?;
        for (flat, &v) in numeric.iter().enumerate() {
            let idx = unflatten(flat, dim, 3);
            let exact = to_f64(&ctx.geo.gamma.get(idx[0], idx[1], idx[2]).eval(x)?);
            if !agrees(v, exact, tol) {
                t.fail_at(&idx, exact, v);
            }
        }
    }
    t.note(format!(
        "{} points, h = {}, tolerance {tol}",
        points.len(),
        ctx.cfg.oracle.h
    ));
    Ok(t)
}

fn oracle_riemann(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let dim = nvars(ctx);
    let tol = ctx.cfg.oracle.tolerance;
    let points = sample_points(ctx);
    for x in &points {
        let numeric = fd_riemann(&ctx.spec, &float_point(ctx, x)?)?;
        let exact = exact_riemann(ctx, x)?;
        for (flat, (&v, &e)) in numeric.iter().zip(&exact).enumerate() {
            if !agrees(v, e, tol) {
                t.fail_at(&unflatten(flat, dim, 4), e, v);
            }
        }
    }
    t.note(format!(
        "{} points, h = {}, tolerance {tol}",
        points.len(),
        ctx.cfg.oracle.h
    ));
    Ok(t)
}

/// Errors at or below this are roundoff: the three-point stencil is exact
/// when every metric entry is at most quadratic in each coordinate.
const ROUNDOFF_FLOOR: f64 = 1e-12;

fn oracle_convergence(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let h = ctx.cfg.oracle.convergence_h;
    let mut worst: Option<Convergence> = None;
    for x in sample_points(ctx) {
        let exact = exact_riemann(ctx, &x)?;
        let coords: Vec<f64> = x.iter().map(to_f64).collect();
        let conv = fd_convergence(&ctx.spec, &coords, h, &exact)?;
        if worst.as_ref().is_none_or(|w| conv.error_h > w.error_h) {
            worst = Some(conv);
        }
    }
    let Some(conv) = worst else {
        t.note("no sample points configured");
        return Ok(t);
    };
    let component: Vec<usize> = conv.component.to_vec();
    let label = component
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",");
    if conv.error_h <= ROUNDOFF_FLOOR {
        t.note(format!(
            "largest three-point error {:.3e} at h = {h} is roundoff; the stencil is exact for this metric",
            conv.error_h
        ));
        return Ok(t);
    }
    let ratio = conv.ratio();
    if !(3.0..=5.0).contains(&ratio) {
        t.fail_at(&component, "ratio in [3, 5]", ratio);
    }
    t.note(format!(
        "component ({label}): error {:.3e} at h = {h}, {:.3e} at h/2, ratio {ratio:.3}",
        conv.error_h, conv.error_half
    ));
    Ok(t)
}

fn oracle_loop_transport(ctx: &mut Ctx) -> Result<Tally> {
    let mut t = Tally::default();
    let f = frame(ctx);
    let o = &ctx.cfg.oracle;
    let settings = LoopSettings {
        eps: o.eps,
        steps: o.steps,
        fd_step: o.h,
    };
    let measured: DMatrix<f64> = loop_transport(&ctx.spec, (f.q1(), f.q2()), settings)?;
    let exact = ctx.geo.operator_at_origin(f.q1(), f.q2(), &[]);
    let bound = o.transport_factor * o.eps;
    let mut worst: f64 = 0.0;
    for a in 0..f.dim() {
        for b in 0..f.dim() {
            let e = to_f64(&exact[(a, b)]);
            let err = (measured[(a, b)] - e).abs();
            worst = worst.max(err);
            if err > bound {
                t.fail_at(&[a, b], e, measured[(a, b)]);
            }
        }
    }
    t.note(format!("max deviation {worst:.3e}, bound {bound:.3e}"));
    Ok(t)
}
