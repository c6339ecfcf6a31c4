//! Christoffel symbols, the curvature tensor and its iterated covariant
//! derivatives as exact polynomial tensors, and the holonomy algebra they
//! generate at the origin.
//!
//! Conventions:
//! * `Γ^a_{bc} = ½ g^{ad} (∂_b g_{dc} + ∂_c g_{bd} − ∂_d g_{bc})`
//! * `R(∂_c, ∂_d) ∂_b = R^a_{bcd} ∂_a` with
//!   `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{cf} Γ^f_{db} − Γ^a_{df} Γ^f_{cb}`
//! * `∇^r R(X, Y; Z_1; ...; Z_r) = (∇_{Z_r} ⋯ ∇_{Z_1} R)(X, Y)`: each new
//!   derivative index is appended last.
//!
//! Tensors store only their nonzero components; every component is computed.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::liealg::{gh_basis, pr_so_n, span_lie_closure, AlgebraSpan, Frame};
use crate::matrix::{Echelon, RatMatrix};
use crate::metric::{
    build_metric_with, invert_metric, HSpec, MetricField, MetricOptions, PolyInverse,
};
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct ChristoffelField {
    dim: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl ChristoffelField {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^a_{bc}`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Poly {
        &self.data[(a * self.dim + b) * self.dim + c]
    }

    fn nonzero_lower(&self, a: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.dim {
            for c in 0..self.dim {
                if !self.get(a, b, c).is_zero() {
                    out.push((b, c));
                }
            }
        }
        out
    }

    /// For a fixed last lower index `l`: all `(a, f)` with `Γ^a_{fl} ≠ 0`.
    fn nonzero_by_last(&self, l: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for f in 0..self.dim {
                if !self.get(a, f, l).is_zero() {
                    out.push((a, f));
                }
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

pub fn christoffel(m: &MetricField, inverse: &[Vec<Poly>]) -> ChristoffelField {
    let dim = m.dim();
    let nvars = m.nvars();
    // dg[e][a][b] = ∂_e g_{ab}
    let dg: Vec<Vec<Vec<Poly>>> = (0..dim)
        .map(|e| {
            (0..dim)
                .map(|a| {
                    (0..dim)
                        .map(|b| m.g[a][b].partial(e).expect("variable in range"))
                        .collect()
                })
                .collect()
        })
        .collect();
    let half = crate::rational::rat(1, 2);
    let mut first_kind = vec![Poly::zero(nvars); dim * dim * dim];
    for d in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let mut s = dg[b][d][c].clone();
                s += &dg[c][b][d];
                s -= &dg[d][b][c];
                first_kind[(d * dim + b) * dim + c] = s.scale(&half);
            }
        }
    }
    let mut data = vec![Poly::zero(nvars); dim * dim * dim];
    for a in 0..dim {
        for d in 0..dim {
            let gi = &inverse[a][d];
            if gi.is_zero() {
                continue;
            }
            for b in 0..dim {
                for c in 0..dim {
                    let fk = &first_kind[(d * dim + b) * dim + c];
                    if !fk.is_zero() {
                        data[(a * dim + b) * dim + c] += &(gi * fk);
                    }
                }
            }
        }
    }
    ChristoffelField { dim, nvars, data }
}

/// `R^a_{b,c,d;f_1;...;f_r}` with index layout `[a, b, c, d, f_1, ..., f_r]`.
#[derive(Clone, Debug)]
pub struct CurvTensor {
    order: usize,
    dim: usize,
    comps: BTreeMap<Vec<u8>, Poly>,
    zero: Poly,
}

impl CurvTensor {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of indices, `4 + order`.
    pub fn rank(&self) -> usize {
        4 + self.order
    }

    pub fn get(&self, idx: &[usize]) -> &Poly {
        debug_assert_eq!(idx.len(), self.rank());
        let key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
        self.comps.get(&key).unwrap_or(&self.zero)
    }

    pub fn get_key(&self, key: &[u8]) -> &Poly {
        self.comps.get(key).unwrap_or(&self.zero)
    }

    /// Nonzero components in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&[u8], &Poly)> {
        self.comps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_nonzero(&self) -> usize {
        self.comps.len()
    }
}

fn collect(order: usize, dim: usize, nvars: usize, acc: HashMap<Vec<u8>, Poly>) -> CurvTensor {
    let comps = acc.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    CurvTensor {
        order,
        dim,
        comps,
        zero: Poly::zero(nvars),
    }
}

fn accumulate(acc: &mut HashMap<Vec<u8>, Poly>, key: Vec<u8>, p: Poly) {
    if p.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(slot) => *slot += &p,
        None => {
            acc.insert(key, p);
        }
    }
}

pub fn riemann(gamma: &ChristoffelField) -> CurvTensor {
    let dim = gamma.dim;
    let nvars = gamma.nvars;
    let mut acc = HashMap::new();
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    if c == d {
                        continue;
                    }
                    let mut r = gamma.get(a, d, b).partial(c).expect("in range");
                    r -= &gamma.get(a, c, b).partial(d).expect("in range");
                    for f in 0..dim {
                        let acf = gamma.get(a, c, f);
                        let fdb = gamma.get(f, d, b);
                        if !acf.is_zero() && !fdb.is_zero() {
                            r += &(acf * fdb);
                        }
                        let adf = gamma.get(a, d, f);
                        let fcb = gamma.get(f, c, b);
                        if !adf.is_zero() && !fcb.is_zero() {
                            r -= &(adf * fcb);
                        }
                    }
                    accumulate(&mut acc, vec![a as u8, b as u8, c as u8, d as u8], r);
                }
            }
        }
    }
    collect(0, dim, nvars, acc)
}

/// Covariant derivative of a `(1, 3+r)` tensor; the new index goes last.
///
/// Works by scattering each nonzero source component into every target it
/// contributes to, so the cost scales with the number of nonzeros.
pub fn nabla(t: &CurvTensor, gamma: &ChristoffelField) -> CurvTensor {
    let dim = t.dim;
    let nvars = gamma.nvars;
    let by_last: Vec<Vec<(usize, usize)>> = (0..dim).map(|l| gamma.nonzero_by_last(l)).collect();
    let by_upper: Vec<Vec<(usize, usize)>> = (0..dim).map(|a| gamma.nonzero_lower(a)).collect();
    let mut acc: HashMap<Vec<u8>, Poly> = HashMap::new();

    for (key, p) in &t.comps {
        let upper = key[0] as usize;
        // ∂_f T
        for f in 0..dim {
            let dp = p.partial(f).expect("in range");
            if !dp.is_zero() {
                let mut k = key.clone();
                k.push(f as u8);
                accumulate(&mut acc, k, dp);
            }
        }
        // + Γ^a_{f l} T^l_S
        for &(a, f) in &by_last[upper] {
            let mut k = key.clone();
            k[0] = a as u8;
            k.push(f as u8);
            accumulate(&mut acc, k, gamma.get(a, f, upper) * p);
        }
        // − Γ^{l}_{f m} T^a_{...l...}, contributing to the slot value m
        for slot in 1..key.len() {
            let l = key[slot] as usize;
            for &(f, m) in &by_upper[l] {
                let mut k = key.clone();
                k[slot] = m as u8;
                k.push(f as u8);
                accumulate(&mut acc, k, -&(gamma.get(l, f, m) * p));
            }
        }
    }
    collect(t.order + 1, dim, nvars, acc)
}

/// Everything derived from one `HSpec`: metric, inverse, connection and the
/// curvature tower `∇^0 R .. ∇^{r_max} R`.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub spec: HSpec,
    pub metric: MetricField,
    pub inverse: PolyInverse,
    pub gamma: ChristoffelField,
    pub tower: Vec<CurvTensor>,
}

impl Geometry {
    pub fn build(spec: &HSpec, r_max: usize) -> Result<Self> {
        Self::build_with(spec, r_max, MetricOptions::default())
    }

    pub fn build_with(spec: &HSpec, r_max: usize, options: MetricOptions) -> Result<Self> {
        let metric = build_metric_with(spec, options);
        let inverse = invert_metric(&metric)?;
        let gamma = christoffel(&metric, &inverse.inverse);
        let mut tower = vec![riemann(&gamma)];
        for _ in 0..r_max {
            let next = nabla(tower.last().expect("nonempty"), &gamma);
            tower.push(next);
        }
        Ok(Geometry {
            spec: spec.clone(),
            metric,
            inverse,
            gamma,
            tower,
        })
    }

    pub fn frame(&self) -> Frame {
        self.spec.frame()
    }

    pub fn r_max(&self) -> usize {
        self.tower.len() - 1
    }

    pub fn curvature(&self, order: usize) -> &CurvTensor {
        &self.tower[order]
    }

    /// Matrix of `∇^r R(∂_c, ∂_d; ∂_{f_1}; ...)_0`: entry `[a][b]` is
    /// `R^a_{b,c,d;f..}` at the origin.
    pub fn operator_at_origin(&self, c: usize, d: usize, derivs: &[usize]) -> RatMatrix {
        let t = &self.tower[derivs.len()];
        let dim = t.dim;
        let mut m = RatMatrix::zeros(dim, dim);
        let mut idx = vec![0, 0, c, d];
        idx.extend_from_slice(derivs);
        for a in 0..dim {
            for b in 0..dim {
                idx[0] = a;
                idx[1] = b;
                m[(a, b)] = t.get(&idx).eval_origin();
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    /// Every tuple `(c < d, f_1..f_r)` avoiding the indices 1 and 2.
    #[default]
    Pruned,
    /// Every tuple `(c < d, f_1..f_r)` at every order.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub c: usize,
    pub d: usize,
    pub derivs: Vec<usize>,
    pub matrix: RatMatrix,
}

impl Generator {
    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    /// 1-based index tuple `(c, d, f_1, ..)` for reports.
    pub fn label(&self) -> Vec<usize> {
        let mut v = vec![self.c + 1, self.d + 1];
        v.extend(self.derivs.iter().map(|f| f + 1));
        v
    }
}

/// Nonzero origin operators, in deterministic (order, tuple) order.
#[derive(Clone, Debug)]
pub struct HolonomyGenerators {
    pub mode: EnumerationMode,
    pub r_max: usize,
    pub generators: Vec<Generator>,
    /// Number of index tuples visited.
    pub tuples_visited: usize,
    /// Nonzero operators found outside the pruned set (exhaustive mode only).
    pub outside_pruned: Vec<Generator>,
}

impl HolonomyGenerators {
    pub fn matrices(&self) -> Vec<RatMatrix> {
        self.generators.iter().map(|g| g.matrix.clone()).collect()
    }
}

/// Tuples touching `∂_1` or `∂_2` are skipped: `Γ^a_{1b} = Γ^a_{2b} = 0` and
/// nothing depends on `x^1, x^2`, so `∇_{∂_1}`, `∇_{∂_2}` and `R(∂_1, ·)`,
/// `R(∂_2, ·)` vanish identically at every order.
fn in_pruned_set(frame: &Frame, tail: &[u8]) -> bool {
    tail.iter()
        .all(|&i| i as usize != frame.p1() && i as usize != frame.p2())
}

/// Groups the origin values of every component by `(c, d, f..)` with `c < d`.
fn origin_operators(t: &CurvTensor) -> BTreeMap<Vec<u8>, RatMatrix> {
    let dim = t.dim;
    let mut out: BTreeMap<Vec<u8>, RatMatrix> = BTreeMap::new();
    for (key, p) in t.nonzero() {
        if key[2] >= key[3] {
            continue;
        }
        let v = p.eval_origin();
        if v.is_zero() {
            continue;
        }
        let m = out
            .entry(key[2..].to_vec())
            .or_insert_with(|| RatMatrix::zeros(dim, dim));
        m[(key[0] as usize, key[1] as usize)] = v;
    }
    out
}

pub fn holonomy_generators(
    geo: &Geometry,
    r_max: usize,
    mode: EnumerationMode,
) -> HolonomyGenerators {
    let frame = geo.frame();
    let dim = frame.dim();
    let r_max = r_max.min(geo.r_max());
    let mut generators = Vec::new();
    let mut outside_pruned = Vec::new();
    let mut tuples_visited = 0;
    let make = |tail: &[u8], matrix: RatMatrix| Generator {
        c: tail[0] as usize,
        d: tail[1] as usize,
        derivs: tail[2..].iter().map(|&i| i as usize).collect(),
        matrix,
    };
    for order in 0..=r_max {
        let ops = origin_operators(&geo.tower[order]);
        match mode {
            EnumerationMode::Pruned => {
                for (tail, m) in ops {
                    if in_pruned_set(&frame, &tail) {
                        tuples_visited += 1;
                        generators.push(make(&tail, m));
                    }
                }
            }
            EnumerationMode::Exhaustive => {
                let mut tail = vec![0u8; 2 + order];
                loop {
                    if tail[0] < tail[1] {
                        tuples_visited += 1;
                        if let Some(m) = ops.get(&tail) {
                            let g = make(&tail, m.clone());
                            if !in_pruned_set(&frame, &tail) {
                                outside_pruned.push(g.clone());
                            }
                            generators.push(g);
                        }
                    }
                    if !advance(&mut tail, dim) {
                        break;
                    }
                }
            }
        }
    }
    HolonomyGenerators {
        mode,
        r_max,
        generators,
        tuples_visited,
        outside_pruned,
    }
}

/// Odometer increment over `0..dim` in every position; `false` after the last tuple.
pub(crate) fn advance(tuple: &mut [u8], dim: usize) -> bool {
    for pos in (0..tuple.len()).rev() {
        if (tuple[pos] as usize) + 1 < dim {
            tuple[pos] += 1;
            return true;
        }
        tuple[pos] = 0;
    }
    false
}

#[derive(Clone, Debug)]
pub struct HolonomyResult {
    pub span: AlgebraSpan,
    pub expected: AlgebraSpan,
    pub equal: bool,
    pub generators: HolonomyGenerators,
    /// `dim g^h − dim hol_0` when they differ.
    pub deficit: isize,
    /// Basis elements of `h` not reached by the projection of `hol_0`.
    pub missing_directions: Vec<RatMatrix>,
}

pub fn holonomy_algebra(
    geo: &Geometry,
    r_max: usize,
    mode: EnumerationMode,
) -> Result<HolonomyResult> {
    let frame = geo.frame();
    let dim = frame.dim();
    let generators = holonomy_generators(geo, r_max, mode);
    let span = span_lie_closure(dim, generators.matrices())?;
    let expected = span_lie_closure(dim, gh_basis(frame.n, geo.spec.basis())?)?;
    let equal = crate::liealg::equal_span(&span, &expected);
    let mut missing_directions = Vec::new();
    if !equal {
        let n = frame.n;
        let mut projected = Echelon::new(n * n);
        for m in span.basis_matrices() {
            if let Ok(a) = pr_so_n(&m) {
                projected.insert(a.flat().to_vec());
            }
        }
        for a in geo.spec.basis() {
            if !projected.contains(a.flat()) {
                missing_directions.push(a.clone());
            }
        }
    }
    Ok(HolonomyResult {
        deficit: expected.dim() as isize - span.dim() as isize,
        span,
        expected,
        equal,
        generators,
        missing_directions,
    })
}

/// `∂_v` applied to every component.
pub fn partial_tensor(t: &CurvTensor, v: usize) -> Vec<(Vec<u8>, Poly)> {
    t.nonzero()
        .filter_map(|(k, p)| {
            let dp = p.partial(v).expect("in range");
            (!dp.is_zero()).then(|| (k.to_vec(), dp))
        })
        .collect()
}

pub fn origin_value(p: &Poly) -> Rational {
    p.eval_origin()
}
