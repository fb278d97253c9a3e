//! Linearization over the rationals: graded bimodule matrices, 2-cocycle
//! twists and their cohomology, rigidity, star-triangular face models,
//! and the matrix form of the quantum Yang-Baxter equation.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals
//! and invertibility is decided by rank, never by a numeric tolerance.

use crate::quiver::{self, Arrow, FiniteQuiver, Vertex, VertexSet};
use crate::solution::{check_nondegenerate, NonDegenerateSolution, Solution};
use crate::{Check, Violation};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

pub type Scalar = BigRational;

pub fn sc(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

fn fmt_scalar(s: &Scalar) -> String {
    if s.denom() == &num_bigint::BigInt::from(1) {
        format!("{}", s.numer())
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// A based 𝕜P-bimodule: each basis element carries a degree in P×P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    pub base: VertexSet,
    pub labels: Vec<String>,
    pub degree: Vec<(Vertex, Vertex)>,
}

impl GradedSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Lin(A): one basis element e_x per arrow, in degree (𝔰(x), 𝔢(x)).
pub fn linearize(a: &FiniteQuiver) -> GradedSpace {
    GradedSpace {
        base: a.base().clone(),
        labels: a.arrows().map(|x| a.id(x).to_string()).collect(),
        degree: a.arrows().map(|x| (a.src(x), a.end(x))).collect(),
    }
}

/// The unit object 𝕜P.
pub fn unit_space(base: &VertexSet) -> GradedSpace {
    GradedSpace {
        base: base.clone(),
        labels: base.names().to_vec(),
        degree: base.iter().map(|v| (v, v)).collect(),
    }
}

/// The dual space: δ_x sits in the reversed degree.
pub fn dual_space(m: &GradedSpace) -> GradedSpace {
    GradedSpace {
        base: m.base.clone(),
        labels: m.labels.iter().map(|l| format!("{l}*")).collect(),
        degree: m.degree.iter().map(|&(p, q)| (q, p)).collect(),
    }
}

/// The basis of M₁ ⊗_{𝕜P} ⋯ ⊗_{𝕜P} Mₙ: tuples whose degrees compose.
#[derive(Debug, Clone)]
pub struct ChainBasis {
    pub space: GradedSpace,
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ChainBasis {
    pub fn index(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }
}

pub fn chain(spaces: &[&GradedSpace]) -> ChainBasis {
    assert!(!spaces.is_empty());
    let base = spaces[0].base.clone();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for m in spaces {
        let mut next = Vec::new();
        for t in &tuples {
            for i in 0..m.dim() {
                if let Some(&last) = t.last() {
                    // the previous factor is the preceding space
                    let prev = spaces[t.len() - 1];
                    if prev.degree[last].1 != m.degree[i].0 {
                        continue;
                    }
                }
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let labels = tuples
        .iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .map(|(k, &i)| spaces[k].labels[i].clone())
                .collect::<Vec<_>>()
                .join("⊗")
        })
        .collect();
    let degree = tuples
        .iter()
        .map(|t| {
            let first = spaces[0].degree[t[0]].0;
            let last = spaces[t.len() - 1].degree[*t.last().unwrap()].1;
            (first, last)
        })
        .collect();
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    ChainBasis { space: GradedSpace { base, labels, degree }, tuples, index }
}

pub fn tensor_space(a: &GradedSpace, b: &GradedSpace) -> ChainBasis {
    chain(&[a, b])
}

/// A degree-0 map of based bimodules, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleMatrix {
    pub dom: GradedSpace,
    pub cod: GradedSpace,
    /// (row, col) → nonzero scalar; row indexes cod, col indexes dom
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl BimoduleMatrix {
    pub fn zero(dom: GradedSpace, cod: GradedSpace) -> Self {
        BimoduleMatrix { dom, cod, entries: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut m = Self::zero(space.clone(), space.clone());
        for i in 0..space.dim() {
            m.entries.insert((i, i), Scalar::one());
        }
        m
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) -> Check<()> {
        if self.cod.degree[row] != self.dom.degree[col] {
            return Err(Violation::new(
                "graded-entry",
                format!("({},{})", self.cod.labels[row], self.dom.labels[col]),
            ));
        }
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: Scalar) -> Check<()> {
        let current = self.get(row, col);
        self.set(row, col, current + value)
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    /// self ∘ other.
    pub fn compose(&self, other: &BimoduleMatrix) -> Check<BimoduleMatrix> {
        if self.dom != other.cod {
            return Err(Violation::new("compose-shape", "middle spaces differ"));
        }
        let mut by_row: HashMap<usize, Vec<(usize, &Scalar)>> = HashMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = BimoduleMatrix::zero(other.dom.clone(), self.cod.clone());
        for (&(r, k), v) in &self.entries {
            if let Some(cols) = by_row.get(&k) {
                for &(c, w) in cols {
                    out.add_to(r, c, v * w)?;
                }
            }
        }
        Ok(out)
    }

    /// Re-verify that every stored entry is degree-0 and nonzero.
    pub fn lint(&self) -> Check<()> {
        for (&(r, c), v) in &self.entries {
            if self.cod.degree[r] != self.dom.degree[c] {
                return Err(Violation::new(
                    "graded-entry",
                    format!("({},{})", self.cod.labels[r], self.dom.labels[c]),
                ));
            }
            if v.is_zero() {
                return Err(Violation::new("stored-zero", format!("({r},{c})")));
            }
        }
        Ok(())
    }

    /// Exact rank by fraction Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.cod.dim(), self.dom.dim());
        let mut a = vec![vec![Scalar::zero(); cols]; rows];
        for (&(r, c), v) in &self.entries {
            a[r][c] = v.clone();
        }
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in 0..rows {
                if r != rank && !a[r][col].is_zero() {
                    let f = &a[r][col] / &pivot;
                    for c in col..cols {
                        let delta = &f * &a[rank][c];
                        a[r][c] = &a[r][c] - delta;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.dom.dim() == self.cod.dim() && self.rank() == self.dom.dim()
    }

    /// Canonical textual form: sparse triples sorted by (degree, row, col).
    pub fn export(&self) -> String {
        let mut lines: Vec<((Vertex, Vertex), usize, usize, String)> = self
            .entries
            .iter()
            .map(|(&(r, c), v)| (self.cod.degree[r], r, c, fmt_scalar(v)))
            .collect();
        lines.sort();
        let mut out = String::new();
        for ((p, q), r, c, v) in lines {
            out.push_str(&format!(
                "deg ({},{}) {} <- {} : {}\n",
                self.base_name(p),
                self.base_name(q),
                self.cod.labels[r],
                self.dom.labels[c],
                v
            ));
        }
        out
    }

    fn base_name(&self, v: Vertex) -> &str {
        self.cod.base.name(v)
    }
}

/// f ⊗ g on the tensor-product bases.
pub fn tensor_matrix(f: &BimoduleMatrix, g: &BimoduleMatrix) -> Check<BimoduleMatrix> {
    let dom = tensor_space(&f.dom, &g.dom);
    let cod = tensor_space(&f.cod, &g.cod);
    let mut out = BimoduleMatrix::zero(dom.space.clone(), cod.space.clone());
    for (&(rf, cf), vf) in &f.entries {
        for (&(rg, cg), vg) in &g.entries {
            let (Some(r), Some(c)) = (cod.index(&[rf, rg]), dom.index(&[cf, cg])) else {
                continue;
            };
            out.set(r, c, vf * vg)?;
        }
    }
    Ok(out)
}

/// ev: M*⊗M → 𝕜P, δ_x⊗e_y ↦ [x=y] e_{𝔢(x)}.
pub fn ev(m: &GradedSpace) -> BimoduleMatrix {
    let dual = dual_space(m);
    let dom = chain(&[&dual, m]);
    let cod = unit_space(&m.base);
    let mut out = BimoduleMatrix::zero(dom.space.clone(), cod);
    for (i, t) in dom.tuples.iter().enumerate() {
        if t[0] == t[1] {
            out.set(m.degree[t[0]].1, i, Scalar::one()).unwrap();
        }
    }
    out
}

/// The other evaluation: M⊗M* → 𝕜P, e_x⊗δ_y ↦ [x=y] e_{𝔰(x)}.
pub fn ev_op(m: &GradedSpace) -> BimoduleMatrix {
    let dual = dual_space(m);
    let dom = chain(&[m, &dual]);
    let cod = unit_space(&m.base);
    let mut out = BimoduleMatrix::zero(dom.space.clone(), cod);
    for (i, t) in dom.tuples.iter().enumerate() {
        if t[0] == t[1] {
            out.set(m.degree[t[0]].0, i, Scalar::one()).unwrap();
        }
    }
    out
}

/// coev: 𝕜P → M⊗M*, e_P ↦ Σ_{𝔰(x)=P} e_x⊗δ_x.
pub fn coev(m: &GradedSpace) -> BimoduleMatrix {
    let dual = dual_space(m);
    let cod = chain(&[m, &dual]);
    let dom = unit_space(&m.base);
    let mut out = BimoduleMatrix::zero(dom, cod.space.clone());
    for (i, t) in cod.tuples.iter().enumerate() {
        if t[0] == t[1] {
            out.set(i, m.degree[t[0]].0, Scalar::one()).unwrap();
        }
    }
    out
}

/// Zig-zag: (id⊗ev)(coev⊗id) = id as a product of honest matrices on the
/// flattened triple basis.
pub fn check_zigzag(m: &GradedSpace) -> Check<()> {
    let dual = dual_space(m);
    let triple = chain(&[m, &dual, m]);
    let single = chain(&[m]);
    let mut up = BimoduleMatrix::zero(single.space.clone(), triple.space.clone());
    for (j, t) in single.tuples.iter().enumerate() {
        let b = t[0];
        for x in 0..m.dim() {
            if m.degree[x].0 == m.degree[b].0 {
                if let Some(r) = triple.index(&[x, x, b]) {
                    up.set(r, j, Scalar::one())?;
                }
            }
        }
    }
    let mut down = BimoduleMatrix::zero(triple.space.clone(), single.space.clone());
    for (j, t) in triple.tuples.iter().enumerate() {
        if t[1] == t[2] {
            down.set(single.index(&[t[0]]).unwrap(), j, Scalar::one())?;
        }
    }
    let product = down.compose(&up)?;
    if product != BimoduleMatrix::identity(&single.space) {
        return Err(Violation::new("zigzag", "composite is not the identity"));
    }
    Ok(())
}

/// The composable pairs of a quiver, in canonical lexicographic order.
fn pair_space(a: &FiniteQuiver) -> ChainBasis {
    let lin = linearize(a);
    tensor_space(&lin, &lin)
}

/// A 2-cocycle candidate: total, nonzero values on composable pairs.
pub fn constant_cocycle(s: &Solution, value: Scalar) -> BTreeMap<(Arrow, Arrow), Scalar> {
    s.pairs().iter().map(|&p| (p, value.clone())).collect()
}

/// σ^q(e_x⊗e_y) = q_{x,y} e_{x⇀y}⊗e_{x↼y}.
pub fn sigma_q(s: &Solution, q: &BTreeMap<(Arrow, Arrow), Scalar>) -> Check<BimoduleMatrix> {
    let pairs = pair_space(s.quiver());
    let mut out = BimoduleMatrix::zero(pairs.space.clone(), pairs.space.clone());
    for (i, t) in pairs.tuples.iter().enumerate() {
        let key = (t[0], t[1]);
        let Some(v) = q.get(&key) else {
            return Err(Violation::new("cocycle-total", format!("{key:?}")));
        };
        if v.is_zero() {
            return Err(Violation::new("cocycle-zero", format!("{key:?}")));
        }
        let (u, w) = s.apply(t[0], t[1]);
        let row = pairs
            .index(&[u, w])
            .ok_or_else(|| Violation::new("sigma-image", format!("{key:?}")))?;
        out.set(row, i, v.clone())?;
    }
    Ok(out)
}

/// Composable triples in canonical order, shared by the matrix braid
/// checker and the cocycle checker so that their witnesses line up.
fn chain_triples(a: &FiniteQuiver) -> Vec<[Arrow; 3]> {
    let mut out = Vec::new();
    for x in a.arrows() {
        for y in a.arrows() {
            if a.end(x) != a.src(y) {
                continue;
            }
            for z in a.arrows() {
                if a.end(y) == a.src(z) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// The matrix braid equation (m⊗id)(id⊗m)(m⊗id) = (id⊗m)(m⊗id)(id⊗m)
/// for a degree-0 endomorphism of Lin(A)⊗Lin(A), checked column by
/// column on the triple basis; the witness is the first failing triple.
pub fn check_matrix_braid(a: &FiniteQuiver, m: &BimoduleMatrix) -> Check<()> {
    let lin = linearize(a);
    let triples = chain(&[&lin, &lin, &lin]);
    let pairs = pair_space(a);
    let apply_12 = |vec: &BTreeMap<usize, Scalar>| -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&i, v) in vec {
            let t = &triples.tuples[i];
            let col = pairs.index(&[t[0], t[1]]).unwrap();
            for (&(r, c), w) in &m.entries {
                if c == col {
                    let rt = &pairs.tuples[r];
                    if let Some(j) = triples.index(&[rt[0], rt[1], t[2]]) {
                        let e = out.entry(j).or_insert_with(Scalar::zero);
                        *e += v * w;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    let apply_23 = |vec: &BTreeMap<usize, Scalar>| -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&i, v) in vec {
            let t = &triples.tuples[i];
            let col = pairs.index(&[t[1], t[2]]).unwrap();
            for (&(r, c), w) in &m.entries {
                if c == col {
                    let rt = &pairs.tuples[r];
                    if let Some(j) = triples.index(&[t[0], rt[0], rt[1]]) {
                        let e = out.entry(j).or_insert_with(Scalar::zero);
                        *e += v * w;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    for (i, t) in triples.tuples.iter().enumerate() {
        let start: BTreeMap<usize, Scalar> = [(i, Scalar::one())].into();
        let lhs = apply_12(&apply_23(&apply_12(&start)));
        let rhs = apply_23(&apply_12(&apply_23(&start)));
        if lhs != rhs {
            return Err(Violation::new(
                "matrix-braid",
                format!("({},{},{})", a.id(t[0]), a.id(t[1]), a.id(t[2])),
            ));
        }
    }
    Ok(())
}

/// The 2-cocycle condition, in any commutative value group written
/// multiplicatively; the witness triple matches [`check_matrix_braid`].
pub fn check_two_cocycle_with<T, F>(
    s: &Solution,
    q: &BTreeMap<(Arrow, Arrow), T>,
    mul: F,
) -> Check<()>
where
    T: Clone + PartialEq,
    F: Fn(&T, &T) -> T,
{
    let a = s.quiver();
    for [x, y, z] in chain_triples(a) {
        let xy_r = s.ract(x, y);
        let xy_l = s.lact(x, y);
        let yz_l = s.lact(y, z);
        let yz_r = s.ract(y, z);
        let lhs = mul(
            &mul(&q[&(x, y)], &q[&(xy_r, z)]),
            &q[&(xy_l, s.lact(xy_r, z))],
        );
        let rhs = mul(
            &mul(&q[&(y, z)], &q[&(x, yz_l)]),
            &q[&(s.ract(x, yz_l), yz_r)],
        );
        if lhs != rhs {
            return Err(Violation::new(
                "two-cocycle",
                format!("({},{},{})", a.id(x), a.id(y), a.id(z)),
            ));
        }
    }
    Ok(())
}

pub fn check_two_cocycle(s: &Solution, q: &BTreeMap<(Arrow, Arrow), Scalar>) -> Check<()> {
    check_two_cocycle_with(s, q, |a, b| a * b)
}

/// The coboundary twist q̃ determined by q_{x,y}u_{x⇀y}u_{x↼y} = q̃_{x,y}u_x u_y.
/// `literal_variant` replaces u_y by u_x in the right-hand side; that
/// reading breaks the intertwining property and is kept only so the
/// difference can be demonstrated.
pub fn apply_coboundary(
    s: &Solution,
    q: &BTreeMap<(Arrow, Arrow), Scalar>,
    u: &[Scalar],
    literal_variant: bool,
) -> Check<BTreeMap<(Arrow, Arrow), Scalar>> {
    if u.len() != s.quiver().arrow_count() {
        return Err(Violation::new("coboundary-total", "u length mismatch"));
    }
    for (x, v) in u.iter().enumerate() {
        if v.is_zero() {
            return Err(Violation::new("coboundary-zero", s.quiver().id(x).to_string()));
        }
    }
    let mut out = BTreeMap::new();
    for (&(x, y), v) in q {
        let second = if literal_variant { &u[x] } else { &u[y] };
        let tw = v * &u[s.lact(x, y)] * &u[s.ract(x, y)] / (&u[x] * second);
        out.insert((x, y), tw);
    }
    Ok(out)
}

/// φ_u(e_x) = u_x e_x.
pub fn intertwiner_phi(space: &GradedSpace, u: &[Scalar]) -> Check<BimoduleMatrix> {
    if u.len() != space.dim() {
        return Err(Violation::new("coboundary-total", "u length mismatch"));
    }
    let mut out = BimoduleMatrix::zero(space.clone(), space.clone());
    for (i, v) in u.iter().enumerate() {
        if v.is_zero() {
            return Err(Violation::new("coboundary-zero", space.labels[i].clone()));
        }
        out.set(i, i, v.clone())?;
    }
    Ok(out)
}

/// Cohomologous cocycles intertwine: (φ_u⊗φ_u)σ^q = σ^{q̃}(φ_u⊗φ_u).
pub fn check_coboundary_intertwines(
    s: &Solution,
    q: &BTreeMap<(Arrow, Arrow), Scalar>,
    u: &[Scalar],
) -> Check<()> {
    let qt = apply_coboundary(s, q, u, false)?;
    let lin = linearize(s.quiver());
    let phi = intertwiner_phi(&lin, u)?;
    let phi2 = tensor_matrix(&phi, &phi)?;
    let lhs = phi2.compose(&sigma_q(s, q)?)?;
    let rhs = sigma_q(s, &qt)?.compose(&phi2)?;
    if lhs != rhs {
        return Err(Violation::new("coboundary-intertwine", "matrices differ"));
    }
    Ok(())
}

/// c♭ = (ev⊗id)(id⊗c⊗id)(id⊗coev): M*⊗M → M⊗M*, assembled as a product
/// of matrices on flattened chain bases; invertibility is decided by
/// exact rank and must agree with non-degeneracy of the solution.
pub fn rigidity_flat(
    s: &Solution,
    q: &BTreeMap<(Arrow, Arrow), Scalar>,
) -> Check<(BimoduleMatrix, bool)> {
    let a = s.quiver();
    let m = linearize(a);
    let d = dual_space(&m);
    let dom = chain(&[&d, &m]);
    let quad = chain(&[&d, &m, &m, &d]);
    let cod = chain(&[&m, &d]);
    // id⊗id⊗coev
    let mut step1 = BimoduleMatrix::zero(dom.space.clone(), quad.space.clone());
    for (j, t) in dom.tuples.iter().enumerate() {
        for u in 0..m.dim() {
            if m.degree[u].0 != m.degree[t[1]].1 {
                continue;
            }
            if let Some(r) = quad.index(&[t[0], t[1], u, u]) {
                step1.set(r, j, Scalar::one())?;
            }
        }
    }
    // id⊗c⊗id
    let mut step2 = BimoduleMatrix::zero(quad.space.clone(), quad.space.clone());
    for (j, t) in quad.tuples.iter().enumerate() {
        let (y, u) = (t[1], t[2]);
        if a.end(y) != a.src(u) {
            continue;
        }
        let Some(v) = q.get(&(y, u)) else {
            return Err(Violation::new("cocycle-total", format!("({y},{u})")));
        };
        let (l, r) = s.apply(y, u);
        if let Some(row) = quad.index(&[t[0], l, r, t[3]]) {
            step2.set(row, j, v.clone())?;
        }
    }
    // ev⊗id⊗id, with the unit factor stripped
    let mut step3 = BimoduleMatrix::zero(quad.space.clone(), cod.space.clone());
    for (j, t) in quad.tuples.iter().enumerate() {
        if t[0] == t[1] {
            if let Some(r) = cod.index(&[t[2], t[3]]) {
                step3.set(r, j, Scalar::one())?;
            }
        }
    }
    let flat = step3.compose(&step2)?.compose(&step1)?;
    // an empty braiding carries no rigidity information: invertible by
    // convention, matching the vacuous reading of non-degeneracy
    let verdict = flat.is_invertible() || s.pairs().is_empty();
    let nondeg = check_nondegenerate(s).is_ok();
    if verdict != nondeg {
        return Err(Violation::new(
            "rigidity-mismatch",
            format!("invertible={verdict} nondegenerate={nondeg}"),
        ));
    }
    Ok((flat, verdict))
}

/// One box of a face model, with its four sides and weight.
#[derive(Debug, Clone)]
pub struct FaceBox {
    pub top: Arrow,
    pub left: Arrow,
    pub right: Arrow,
    pub bottom: Arrow,
    pub weight: Scalar,
}

/// A face model: horizontal and vertical quivers over a common base and
/// a weighted set of boxes whose sides match at the corners.
#[derive(Debug, Clone)]
pub struct FaceModel {
    pub h: FiniteQuiver,
    pub v: FiniteQuiver,
    pub boxes: Vec<FaceBox>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceModelReport {
    pub theta_injective: bool,
    pub xi_surjective: bool,
    pub xi_injective: bool,
    pub thin: bool,
    pub vacant: bool,
}

/// Corner and weight validation plus the Θ/Ξ classification. Θ sends a
/// box to its four sides; Ξ sends it to the outer corner (top, right).
pub fn check_face_model(fm: &FaceModel) -> Check<FaceModelReport> {
    if fm.h.base() != fm.v.base() {
        return Err(Violation::new("same-base", "horizontal and vertical bases differ"));
    }
    let mut thetas = std::collections::BTreeSet::new();
    let mut xis = std::collections::BTreeSet::new();
    for (i, b) in fm.boxes.iter().enumerate() {
        if fm.h.src(b.top) != fm.v.src(b.left)
            || fm.h.end(b.top) != fm.v.src(b.right)
            || fm.v.end(b.left) != fm.h.src(b.bottom)
            || fm.v.end(b.right) != fm.h.end(b.bottom)
        {
            return Err(Violation::new("box-corners", format!("box {i}")));
        }
        if b.weight.is_zero() {
            return Err(Violation::new("box-weight", format!("box {i}")));
        }
        thetas.insert((b.top, b.left, b.right, b.bottom));
        xis.insert((b.top, b.right));
    }
    let theta_injective = thetas.len() == fm.boxes.len();
    let xi_injective = xis.len() == fm.boxes.len();
    let total: usize = fm
        .h
        .arrows()
        .map(|x| fm.v.arrows().filter(|&g| fm.v.src(g) == fm.h.end(x)).count())
        .sum();
    let xi_surjective = xis.len() == total;
    let thin = theta_injective && xi_surjective;
    Ok(FaceModelReport {
        theta_injective,
        xi_surjective,
        xi_injective,
        thin,
        vacant: thin && xi_injective,
    })
}

/// The vacant model of a solution: one box per composable pair (x,g)
/// with sides (top x, left x⇀g, right g, bottom x↼g) and weight q_{x,g}.
pub fn face_model_from_solution(
    s: &Solution,
    q: &BTreeMap<(Arrow, Arrow), Scalar>,
) -> Check<FaceModel> {
    let a = s.quiver();
    let mut boxes = Vec::new();
    for &(x, g) in s.pairs() {
        let Some(w) = q.get(&(x, g)) else {
            return Err(Violation::new("cocycle-total", format!("({x},{g})")));
        };
        boxes.push(FaceBox {
            top: x,
            left: s.lact(x, g),
            right: g,
            bottom: s.ract(x, g),
            weight: w.clone(),
        });
    }
    let fm = FaceModel { h: a.clone(), v: a.clone(), boxes };
    let report = check_face_model(&fm)?;
    if !report.vacant {
        return Err(Violation::new("not-vacant", "solution model must be vacant"));
    }
    Ok(fm)
}

fn face_matrix(fm: &FaceModel) -> Check<BimoduleMatrix> {
    let (lh, lv) = (linearize(&fm.h), linearize(&fm.v));
    let dom = chain(&[&lh, &lv]);
    let cod = chain(&[&lv, &lh]);
    let mut out = BimoduleMatrix::zero(dom.space.clone(), cod.space.clone());
    for b in &fm.boxes {
        let col = dom
            .index(&[b.top, b.right])
            .ok_or_else(|| Violation::new("box-corners", "outer corner not composable"))?;
        let row = cod
            .index(&[b.left, b.bottom])
            .ok_or_else(|| Violation::new("box-corners", "inner corner not composable"))?;
        out.add_to(row, col, b.weight.clone())?;
    }
    Ok(out)
}

/// c^w(e_x⊗e_g) = Σ w e_f⊗e_y over boxes with top x and right g.
/// Requires a thin model: a Θ collision or an Ξ gap is an error here.
pub fn solution_matrix_from_face_model(fm: &FaceModel) -> Check<BimoduleMatrix> {
    let report = check_face_model(fm)?;
    if !report.theta_injective {
        return Err(Violation::new("non-thin", "theta collision"));
    }
    if !report.xi_surjective {
        return Err(Violation::new("non-thin", "xi gap"));
    }
    face_matrix(fm)
}

#[derive(Debug, Clone)]
pub struct StarTriangularReport {
    pub braid_ok: bool,
    pub braid_witness: Option<String>,
    pub invertible: bool,
}

/// Star-triangularity: the full matrix braid test on c^w, plus the
/// bijectivity that a vacant model would guarantee. Runs on any model
/// with matching horizontal and vertical quivers, even a non-thin one.
pub fn star_triangular(fm: &FaceModel) -> Check<StarTriangularReport> {
    check_face_model(fm)?;
    if fm.h.arrow_count() != fm.v.arrow_count()
        || fm.h.arrows().any(|x| fm.h.src(x) != fm.v.src(x) || fm.h.end(x) != fm.v.end(x))
    {
        return Err(Violation::new(
            "star-triangular-shape",
            "horizontal and vertical quivers differ",
        ));
    }
    let m = face_matrix(fm)?;
    let braid = check_matrix_braid(&fm.h, &m);
    Ok(StarTriangularReport {
        braid_ok: braid.is_ok(),
        braid_witness: braid.err().map(|v| v.witness),
        invertible: m.is_invertible(),
    })
}

pub fn export_face_model(fm: &FaceModel) -> String {
    let mut out = String::new();
    for b in &fm.boxes {
        out.push_str(&format!(
            "box top={} left={} right={} bottom={} w={}\n",
            fm.h.id(b.top),
            fm.v.id(b.left),
            fm.v.id(b.right),
            fm.h.id(b.bottom),
            fmt_scalar(&b.weight)
        ));
    }
    out
}

/// The quantum form R = τσ^q checked on triples: R₁₂R₁₃R₂₃ = R₂₃R₁₃R₂₂
/// is evaluated through the intermediate mixed-grading products, and a
/// failure reports the triple together with its degree block.
pub fn qybe_matrix_table(
    a: &FiniteQuiver,
    table: &BTreeMap<(Arrow, Arrow), (Arrow, Arrow)>,
    q: &BTreeMap<(Arrow, Arrow), Scalar>,
) -> Check<()> {
    // R(x,y) = (x↼y, x⇀y) with coefficient q_{x,y}, defined on chains
    let r_apply = |x: Arrow, y: Arrow| -> Check<((Arrow, Arrow), Scalar)> {
        if a.end(x) != a.src(y) {
            return Err(Violation::new(
                "qybe-domain",
                format!(
                    "({},{}) degree ({},{})",
                    a.id(x),
                    a.id(y),
                    a.base().name(a.src(x)),
                    a.base().name(a.end(y))
                ),
            ));
        }
        let Some(&(l, rr)) = table.get(&(x, y)) else {
            return Err(Violation::new("qybe-domain", format!("({},{})", a.id(x), a.id(y))));
        };
        let w = q
            .get(&(x, y))
            .cloned()
            .ok_or_else(|| Violation::new("cocycle-total", format!("({x},{y})")))?;
        Ok(((rr, l), w))
    };
    for [x, y, z] in chain_triples(a) {
        let block = format!(
            "({},{},{}) degree ({},{})",
            a.id(x),
            a.id(y),
            a.id(z),
            a.base().name(a.src(x)),
            a.base().name(a.end(z))
        );
        let located = |e: Violation| Violation::new(e.rule, format!("{} at {block}", e.witness));
        // left side: R23 first, then R13, then R12
        let lhs = (|| -> Check<([Arrow; 3], Scalar)> {
            let ((b, c), w1) = r_apply(y, z)?;
            let ((aa, cc), w2) = r_apply(x, c)?;
            let ((a1, b1), w3) = r_apply(aa, b)?;
            Ok(([a1, b1, cc], w1 * w2 * w3))
        })()
        .map_err(located)?;
        let located = |e: Violation| Violation::new(e.rule, format!("{} at {block}", e.witness));
        let rhs = (|| -> Check<([Arrow; 3], Scalar)> {
            let ((aa, b), w1) = r_apply(x, y)?;
            let ((a1, c1), w2) = r_apply(aa, z)?;
            let ((b1, c2), w3) = r_apply(b, c1)?;
            Ok(([a1, b1, c2], w1 * w2 * w3))
        })()
        .map_err(located)?;
        if lhs != rhs {
            return Err(Violation::new("qybe", block));
        }
    }
    Ok(())
}

pub fn qybe_matrix(s: &Solution, q: &BTreeMap<(Arrow, Arrow), Scalar>) -> Check<()> {
    qybe_matrix_table(s.quiver(), &s.table(), q)
}

/// Brute-force H² over the cyclic group ℤ/k for tiny inputs: counts of
/// cocycles, coboundaries, and their quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Summary {
    pub z2: usize,
    pub b2: usize,
    pub h2: usize,
}

pub fn h2_brute_force(s: &Solution, k: u32) -> Check<H2Summary> {
    if !(1..=4).contains(&k) {
        return Err(Violation::new("h2-budget", "k must be between 1 and 4"));
    }
    let n = s.quiver().arrow_count();
    if n > 4 {
        return Err(Violation::new("h2-budget", "at most 4 arrows"));
    }
    let pairs: Vec<(Arrow, Arrow)> = s.pairs().to_vec();
    let total = (k as u64).checked_pow(pairs.len() as u32);
    if total.map_or(true, |t| t > 2_000_000) {
        return Err(Violation::new("h2-budget", "too many candidate cochains"));
    }
    let addk = |x: &u32, y: &u32| (x + y) % k;
    let mut z2: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for code in 0..total.unwrap() {
        let mut vals = Vec::with_capacity(pairs.len());
        let mut c = code;
        for _ in 0..pairs.len() {
            vals.push((c % k as u64) as u32);
            c /= k as u64;
        }
        let q: BTreeMap<(Arrow, Arrow), u32> =
            pairs.iter().copied().zip(vals.iter().copied()).collect();
        if check_two_cocycle_with(s, &q, addk).is_ok() {
            z2.insert(vals);
        }
    }
    let mut b2: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    for code in 0..(k as u64).pow(n as u32) {
        let mut u = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            u.push((c % k as u64) as u32);
            c /= k as u64;
        }
        let vals: Vec<u32> = pairs
            .iter()
            .map(|&(x, y)| {
                (u[s.lact(x, y)] + u[s.ract(x, y)] + 2 * k - u[x] - u[y]) % k
            })
            .collect();
        b2.insert(vals);
    }
    if z2.len() % b2.len() != 0 {
        return Err(Violation::new("h2-orbits", "coboundaries do not partition cocycles"));
    }
    // orbit count by explicit coset enumeration
    let mut seen: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
    let mut orbits = 0usize;
    for zc in &z2 {
        if seen.contains(zc) {
            continue;
        }
        orbits += 1;
        for bc in &b2 {
            let shifted: Vec<u32> =
                zc.iter().zip(bc).map(|(a, b)| (a + b) % k).collect();
            seen.insert(shifted);
        }
    }
    if orbits != z2.len() / b2.len() {
        return Err(Violation::new("h2-orbits", "orbit count mismatch"));
    }
    Ok(H2Summary { z2: z2.len(), b2: b2.len(), h2: orbits })
}

/// A matrix solution of the form (𝕜A, σ^q) does not determine the
/// braided quiver it came from, so no inverse is offered.
pub fn braided_quiver_from_matrix(_m: &BimoduleMatrix) -> Check<NonDegenerateSolution> {
    Err(Violation::new(
        "not-derivable",
        "a bimodule matrix does not determine a braided quiver; keep the quiver-level data",
    ))
}

/// Bridge to the structure groupoid: the braiding induced on A by the
/// tautological pair of its reduced structure groupoid linearizes to
/// exactly σ^q with q ≡ 1.
pub fn lyz_linearization_bridge(s: &NonDegenerateSolution) -> Check<()> {
    let sp = crate::braided::reduced_structure_groupoid(s)?;
    let (mp, diag, lyz) = crate::matched::tautological_pair(&sp.braided)?;
    let a = s.quiver();
    let n = a.arrow_count();
    let grading = &sp.grading[..n];
    let mut act = HashMap::new();
    for (i, &(p, q)) in diag.pairs.iter().enumerate() {
        for x in a.arrows() {
            if diag.groupoid.end(i) != a.src(x) {
                continue;
            }
            act.insert((i, x), sp.gdlact[&(p, sp.glact[&(q, x)])]);
        }
    }
    let r = crate::matched::check_representation(&mp, a, &act, grading)?;
    let table = crate::matched::braiding_from_lyz(&lyz, &r, &r);
    let pairs = pair_space(a);
    let mut induced = BimoduleMatrix::zero(pairs.space.clone(), pairs.space.clone());
    for (&(x, y), &(u, w)) in &table {
        let col = pairs.index(&[x, y]).unwrap();
        let row = pairs
            .index(&[u, w])
            .ok_or_else(|| Violation::new("lyz-bridge", format!("({},{})", a.id(x), a.id(y))))?;
        induced.set(row, col, Scalar::one())?;
    }
    let direct = sigma_q(s, &constant_cocycle(s, Scalar::one()))?;
    if induced != direct {
        return Err(Violation::new("lyz-bridge", "matrices differ"));
    }
    Ok(())
}

/// Lin respects the tensor product at the level of bases: the canonical
/// bijection between arrows of A ×_P B and composable basis pairs.
pub fn check_lin_monoidal(a: &FiniteQuiver, b: &FiniteQuiver) -> Check<()> {
    let fp = quiver::fiber_product(a, b)?;
    let tb = tensor_space(&linearize(a), &linearize(b));
    if fp.arrow_count() != tb.tuples.len() {
        return Err(Violation::new("lin-monoidal", "basis sizes differ"));
    }
    for (i, t) in tb.tuples.iter().enumerate() {
        let (p, q) = tb.space.degree[i];
        if fp.src(i) != p || fp.end(i) != q {
            return Err(Violation::new("lin-monoidal", format!("pair {t:?}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rack::{conjugation_rack, rack_solution};
    use crate::solution::{flip_solution, identity_solution};
    use crate::groupoid::GroupBundle;

    fn flip_l2() -> NonDegenerateSolution {
        check_nondegenerate(&flip_solution(&fixtures::l2()).unwrap()).unwrap()
    }

    fn conj_s3() -> NonDegenerateSolution {
        rack_solution(&conjugation_rack(&GroupBundle::new(fixtures::s3()).unwrap())).unwrap()
    }

    fn ones(s: &Solution) -> BTreeMap<(Arrow, Arrow), Scalar> {
        constant_cocycle(s, Scalar::one())
    }

    #[test]
    fn linearize_and_duality() {
        let k2 = linearize(&fixtures::k2());
        assert_eq!(k2.dim(), 1);
        assert_eq!(k2.degree[0], (0, 1));
        for q in [fixtures::l2(), fixtures::k2()] {
            check_zigzag(&linearize(&q)).unwrap();
        }
        // ev_op ∘ coev counts the fiber: two loops at p
        let l2 = linearize(&fixtures::l2());
        let trace = ev_op(&l2).compose(&coev(&l2)).unwrap();
        assert_eq!(trace.get(0, 0), sc(2));
    }

    #[test]
    fn sigma_flip_is_permutation_and_braids() {
        let s = flip_l2();
        let m = sigma_q(&s, &ones(&s)).unwrap();
        m.lint().unwrap();
        assert!(m.entries().values().all(|v| v == &Scalar::one()));
        assert!(m.is_invertible());
        check_matrix_braid(s.quiver(), &m).unwrap();
        // constant λ scales both braid sides by λ³
        let m5 = sigma_q(&s, &constant_cocycle(&s, frac(5, 3))).unwrap();
        check_matrix_braid(s.quiver(), &m5).unwrap();
    }

    #[test]
    fn non_cocycle_fails_with_matching_witness() {
        // on the flip every q is a cocycle (both sides of the condition
        // collapse to q_{x,y}q_{x,z}q_{y,z}), so the failing example
        // lives on the conjugation solution instead
        let s = conj_s3();
        // pseudo-random nonconstant values
        let q: BTreeMap<(Arrow, Arrow), Scalar> = s
            .pairs()
            .iter()
            .map(|&(x, y)| ((x, y), sc(1 + ((3 * x + 5 * y) % 3) as i64)))
            .collect();
        let braid = check_matrix_braid(s.quiver(), &sigma_q(&s, &q).unwrap());
        let coc = check_two_cocycle(&s, &q);
        let b = braid.unwrap_err();
        let c = coc.unwrap_err();
        assert_eq!(b.witness, c.witness, "witness triples must agree");
        // a broken underlying map also fails the braid test with q ≡ 1
        let s = flip_l2();
        let mut table = s.table();
        let (k1, k2) = ((0, 0), (0, 1));
        let (v1, v2) = (table[&k1], table[&k2]);
        table.insert(k1, v2);
        table.insert(k2, v1);
        let lin = linearize(s.quiver());
        let pairs = tensor_space(&lin, &lin);
        let mut m = BimoduleMatrix::zero(pairs.space.clone(), pairs.space.clone());
        for (i, t) in pairs.tuples.iter().enumerate() {
            let (u, w) = table[&(t[0], t[1])];
            m.set(pairs.index(&[u, w]).unwrap(), i, Scalar::one()).unwrap();
        }
        assert!(check_matrix_braid(s.quiver(), &m).is_err());
    }

    #[test]
    fn coboundaries_and_cohomology() {
        let s = flip_l2();
        let q = ones(&s);
        let one_u = vec![Scalar::one(); 2];
        assert_eq!(apply_coboundary(&s, &q, &one_u, false).unwrap(), q);
        let u = vec![frac(2, 3), sc(5)];
        let qt = apply_coboundary(&s, &q, &u, false).unwrap();
        check_two_cocycle(&s, &qt).unwrap();
        check_coboundary_intertwines(&s, &q, &u).unwrap();
        // the literal variant is not cohomologically sound
        let q_lit = apply_coboundary(&s, &q, &u, true).unwrap();
        let lin = linearize(s.quiver());
        let phi = intertwiner_phi(&lin, &u).unwrap();
        let phi2 = tensor_matrix(&phi, &phi).unwrap();
        let lhs = phi2.compose(&sigma_q(&s, &q).unwrap()).unwrap();
        let rhs = sigma_q(&s, &q_lit).unwrap().compose(&phi2).unwrap();
        assert_ne!(lhs, rhs);
        // transitivity: twisting by u then w equals twisting by u·w
        let w = vec![sc(7), frac(1, 4)];
        let via_two = apply_coboundary(&s, &qt, &w, false).unwrap();
        let uw: Vec<Scalar> = u.iter().zip(&w).map(|(a, b)| a * b).collect();
        let via_one = apply_coboundary(&s, &q, &uw, false).unwrap();
        assert_eq!(via_two, via_one);
    }

    #[test]
    fn rigidity() {
        let s = flip_l2();
        let (flat, invertible) = rigidity_flat(&s, &ones(&s)).unwrap();
        assert!(invertible);
        // entrywise: c♭(δ_{y⇀u}⊗e_y) = e_{y↼u}⊗δ_u
        let a = s.quiver();
        let m = linearize(a);
        let d = dual_space(&m);
        let dom = chain(&[&d, &m]);
        let cod = chain(&[&m, &d]);
        let mut expected = BimoduleMatrix::zero(dom.space.clone(), cod.space.clone());
        for y in a.arrows() {
            for u in a.arrows() {
                if a.end(y) != a.src(u) {
                    continue;
                }
                let col = dom.index(&[s.lact(y, u), y]).unwrap();
                let row = cod.index(&[s.ract(y, u), u]).unwrap();
                expected.set(row, col, Scalar::one()).unwrap();
            }
        }
        assert_eq!(flat, expected);
        // the identity map on L2 is a solution but degenerate
        let id = identity_solution(&fixtures::l2()).unwrap();
        let (_, inv) = rigidity_flat(&id, &constant_cocycle(&id, Scalar::one())).unwrap();
        assert!(!inv);
        // one-arrow fibers: trivially invertible
        let single = check_nondegenerate(
            &flip_solution(&fixtures::single_loop()).unwrap(),
        )
        .unwrap();
        let (_, inv) = rigidity_flat(&single, &ones(&single)).unwrap();
        assert!(inv);
    }

    #[test]
    fn face_models_roundtrip() {
        let s = flip_l2();
        let fm = face_model_from_solution(&s, &ones(&s)).unwrap();
        assert_eq!(fm.boxes.len(), 4);
        let report = check_face_model(&fm).unwrap();
        assert!(report.vacant);
        let cw = solution_matrix_from_face_model(&fm).unwrap();
        assert_eq!(cw, sigma_q(&s, &ones(&s)).unwrap());
        let st = star_triangular(&fm).unwrap();
        assert!(st.braid_ok && st.invertible);
        for s in [conj_s3()] {
            let fm = face_model_from_solution(&s, &ones(&s)).unwrap();
            assert_eq!(
                solution_matrix_from_face_model(&fm).unwrap(),
                sigma_q(&s, &ones(&s)).unwrap()
            );
        }
    }

    #[test]
    fn thin_gap_behavior() {
        let s = flip_l2();
        let mut fm = face_model_from_solution(&s, &ones(&s)).unwrap();
        fm.boxes.remove(0);
        let report = check_face_model(&fm).unwrap();
        assert!(report.theta_injective && !report.xi_surjective && !report.thin);
        let err = solution_matrix_from_face_model(&fm).unwrap_err();
        assert_eq!(err.rule, "non-thin");
        // recorded behavior: the zero column happens to survive the
        // braid equation here, but bijectivity is lost
        let st = star_triangular(&fm).unwrap();
        assert!(st.braid_ok);
        assert!(!st.invertible);
    }

    #[test]
    fn qybe_form() {
        for s in [flip_l2(), conj_s3()] {
            qybe_matrix(&s, &ones(&s)).unwrap();
        }
        let s = flip_l2();
        let mut broken = s.table();
        let (k1, k2) = ((0, 0), (0, 1));
        let (v1, v2) = (broken[&k1], broken[&k2]);
        broken.insert(k1, v2);
        broken.insert(k2, v1);
        let err = qybe_matrix_table(s.quiver(), &broken, &ones(&s)).unwrap_err();
        assert!(err.witness.contains("degree"), "witness locates the block: {err:?}");
    }

    #[test]
    fn h2_small_cases() {
        // flip: the cocycle condition is vacuous and coboundaries vanish
        let s = flip_l2();
        assert_eq!(
            h2_brute_force(&s, 2).unwrap(),
            H2Summary { z2: 16, b2: 1, h2: 16 }
        );
        let single = flip_solution(&fixtures::single_loop()).unwrap();
        assert_eq!(
            h2_brute_force(&single, 3).unwrap(),
            H2Summary { z2: 3, b2: 1, h2: 3 }
        );
        assert!(h2_brute_force(&conj_s3(), 2).is_err());
    }

    #[test]
    fn no_matrix_inverse() {
        let s = flip_l2();
        let m = sigma_q(&s, &ones(&s)).unwrap();
        assert_eq!(braided_quiver_from_matrix(&m).unwrap_err().rule, "not-derivable");
    }

    #[test]
    fn lyz_bridge() {
        for s in [
            flip_l2(),
            check_nondegenerate(&flip_solution(&fixtures::loop_bundle(&[2, 2])).unwrap())
                .unwrap(),
        ] {
            lyz_linearization_bridge(&s).unwrap();
        }
    }

    #[test]
    fn lin_monoidal_and_export() {
        check_lin_monoidal(&fixtures::l2(), &fixtures::l2()).unwrap();
        check_lin_monoidal(&fixtures::k2(), &fixtures::k2()).unwrap();
        let s = flip_l2();
        let m = sigma_q(&s, &constant_cocycle(&s, frac(1, 2))).unwrap();
        let text = m.export();
        assert!(text.contains("1/2"));
        // byte-stable: re-export is identical
        assert_eq!(text, sigma_q(&s, &constant_cocycle(&s, frac(1, 2))).unwrap().export());
        let fm = face_model_from_solution(&s, &ones(&s)).unwrap();
        assert!(export_face_model(&fm).starts_with("box top="));
    }
}
