//! Finite quivers over a fixed vertex set: the ambient objects of every
//! construction in this crate, together with the monoidal structure of the
//! category of quivers over a base (fiber product, unit), opposites and
//! doubles, paths, and the weak symmetry maps relating them.

use crate::{Check, Violation};
use std::collections::BTreeMap;
use std::fmt;

/// Index of a vertex inside its [`VertexSet`].
pub type Vertex = usize;
/// Index of an arrow inside its [`FiniteQuiver`].
pub type Arrow = usize;

/// A non-empty finite ordered list of distinct vertex identifiers.
///
/// The order is fixed at construction and used as the canonical ordering
/// everywhere (determinism of enumerations and serialized output).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    names: Vec<String>,
}

impl VertexSet {
    pub fn new(names: Vec<String>) -> Check<Self> {
        if names.is_empty() {
            return Err(Violation::new("vertex-set-nonempty", "no vertices given"));
        }
        let mut seen = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.clone(), i).is_some() {
                return Err(Violation::new("vertex-ids-distinct", format!("duplicate vertex {n:?}")));
            }
        }
        Ok(VertexSet { names })
    }

    pub fn of(names: &[&str]) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect()).expect("valid vertex set")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by invariant
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Vertex> {
        self.names.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.names.len()
    }
}

/// A finite quiver: arrows with source and end maps into a [`VertexSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuiver {
    base: VertexSet,
    ids: Vec<String>,
    src: Vec<Vertex>,
    end: Vec<Vertex>,
}

impl FiniteQuiver {
    pub fn new(base: VertexSet, arrows: Vec<(String, Vertex, Vertex)>) -> Check<Self> {
        let mut seen = BTreeMap::new();
        let mut ids = Vec::new();
        let mut src = Vec::new();
        let mut end = Vec::new();
        for (i, (id, s, e)) in arrows.into_iter().enumerate() {
            if s >= base.len() || e >= base.len() {
                return Err(Violation::new("arrow-endpoints-in-base", format!("arrow {id:?}")));
            }
            if seen.insert(id.clone(), i).is_some() {
                return Err(Violation::new("arrow-ids-distinct", format!("duplicate arrow {id:?}")));
            }
            ids.push(id);
            src.push(s);
            end.push(e);
        }
        Ok(FiniteQuiver { base, ids, src, end })
    }

    /// Convenience constructor from names: `arrows` are (id, src, end) triples.
    pub fn of(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Self {
        let base = VertexSet::of(vertices);
        let arrows = arrows
            .iter()
            .map(|(id, s, e)| {
                (
                    id.to_string(),
                    base.index_of(s).expect("known vertex"),
                    base.index_of(e).expect("known vertex"),
                )
            })
            .collect();
        Self::new(base, arrows).expect("valid quiver")
    }

    pub fn base(&self) -> &VertexSet {
        &self.base
    }

    pub fn arrow_count(&self) -> usize {
        self.ids.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        0..self.ids.len()
    }

    pub fn id(&self, a: Arrow) -> &str {
        &self.ids[a]
    }

    pub fn arrow_by_id(&self, id: &str) -> Option<Arrow> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn src(&self, a: Arrow) -> Vertex {
        self.src[a]
    }

    pub fn end(&self, a: Arrow) -> Vertex {
        self.end[a]
    }

    /// Arrows with the given source, in canonical order.
    pub fn from_vertex(&self, v: Vertex) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.src[a] == v).collect()
    }

    /// Arrows with the given end, in canonical order.
    pub fn into_vertex(&self, v: Vertex) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.end[a] == v).collect()
    }

    /// The hom-set A(P,Q).
    pub fn hom(&self, p: Vertex, q: Vertex) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.src[a] == p && self.end[a] == q).collect()
    }

    /// All composable pairs (a,b) with end(a) = src(b), lexicographic in (a,b).
    pub fn composable_pairs(&self) -> Vec<(Arrow, Arrow)> {
        let mut out = Vec::new();
        for a in self.arrows() {
            for b in self.arrows() {
                if self.end[a] == self.src[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Source/end of a signed arrow of this quiver (an arrow of the double).
    pub fn dsrc(&self, x: SignedArrow) -> Vertex {
        if x.pos {
            self.src[x.arrow]
        } else {
            self.end[x.arrow]
        }
    }

    pub fn dend(&self, x: SignedArrow) -> Vertex {
        if x.pos {
            self.end[x.arrow]
        } else {
            self.src[x.arrow]
        }
    }

    /// All signed arrows (arrows of the double), positives first.
    pub fn signed_arrows(&self) -> Vec<SignedArrow> {
        let mut out: Vec<SignedArrow> = self.arrows().map(SignedArrow::pos).collect();
        out.extend(self.arrows().map(SignedArrow::neg));
        out
    }

    pub fn signed_id(&self, x: SignedArrow) -> String {
        if x.pos {
            self.ids[x.arrow].clone()
        } else {
            format!("{}^-1", self.ids[x.arrow])
        }
    }
}

/// An arrow of the double quiver DA: an arrow of A with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedArrow {
    pub arrow: Arrow,
    pub pos: bool,
}

impl SignedArrow {
    pub fn pos(arrow: Arrow) -> Self {
        SignedArrow { arrow, pos: true }
    }

    pub fn neg(arrow: Arrow) -> Self {
        SignedArrow { arrow, pos: false }
    }

    pub fn inv(self) -> Self {
        SignedArrow { arrow: self.arrow, pos: !self.pos }
    }
}

impl fmt::Display for SignedArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos {
            write!(f, "+{}", self.arrow)
        } else {
            write!(f, "-{}", self.arrow)
        }
    }
}

/// A path: a source vertex and a composable sequence of arrows of A.
/// The length-0 path carries only its vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathValue {
    pub src: Vertex,
    pub arrows: Vec<Arrow>,
}

impl PathValue {
    pub fn identity(v: Vertex) -> Self {
        PathValue { src: v, arrows: Vec::new() }
    }

    pub fn new(q: &FiniteQuiver, src: Vertex, arrows: Vec<Arrow>) -> Check<Self> {
        let mut at = src;
        for &a in &arrows {
            if q.src(a) != at {
                return Err(Violation::new(
                    "path-composability",
                    format!("arrow {} does not start at vertex {}", q.id(a), q.base().name(at)),
                ));
            }
            at = q.end(a);
        }
        Ok(PathValue { src, arrows })
    }

    pub fn end(&self, q: &FiniteQuiver) -> Vertex {
        self.arrows.last().map(|&a| q.end(a)).unwrap_or(self.src)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Fiber product A ⊗ B over the common base: arrows are the composable
/// pairs (a,b) with end(a) = src(b); src(a,b) = src(a), end(a,b) = end(b).
pub fn fiber_product(a: &FiniteQuiver, b: &FiniteQuiver) -> Check<FiniteQuiver> {
    if a.base() != b.base() {
        return Err(Violation::new("same-base", "fiber product of quivers over different bases"));
    }
    let mut arrows = Vec::new();
    for x in a.arrows() {
        for y in b.arrows() {
            if a.end(x) == b.src(y) {
                arrows.push((format!("({},{})", a.id(x), b.id(y)), a.src(x), b.end(y)));
            }
        }
    }
    FiniteQuiver::new(a.base().clone(), arrows)
}

/// The monoidal unit: arrow set = base, src = end = id.
pub fn unit_quiver(base: &VertexSet) -> FiniteQuiver {
    let arrows = base.iter().map(|v| (base.name(v).to_string(), v, v)).collect();
    FiniteQuiver::new(base.clone(), arrows).expect("valid unit quiver")
}

/// Opposite quiver: same arrows with src and end swapped, ids tagged `^-1`.
pub fn opposite(a: &FiniteQuiver) -> FiniteQuiver {
    let arrows = a
        .arrows()
        .map(|x| {
            let id = a.id(x);
            // un-tagging makes opposite an involution on the underlying data
            let new_id = match id.strip_suffix("^-1") {
                Some(core) => core.to_string(),
                None => format!("{id}^-1"),
            };
            (new_id, a.end(x), a.src(x))
        })
        .collect();
    FiniteQuiver::new(a.base().clone(), arrows).expect("valid opposite quiver")
}

/// The double DA = A ⊔ A^op. Arrow index i is the positive copy of arrow i,
/// index n+i the negative copy, matching [`FiniteQuiver::signed_arrows`].
pub fn double(a: &FiniteQuiver) -> FiniteQuiver {
    disjoint_union(a, &opposite(a)).expect("double is always defined")
}

/// Disjoint union of two quivers over the same base.
pub fn disjoint_union(a: &FiniteQuiver, b: &FiniteQuiver) -> Check<FiniteQuiver> {
    if a.base() != b.base() {
        return Err(Violation::new("same-base", "disjoint union over different bases"));
    }
    let mut arrows: Vec<(String, Vertex, Vertex)> =
        a.arrows().map(|x| (a.id(x).to_string(), a.src(x), a.end(x))).collect();
    arrows.extend(b.arrows().map(|y| (b.id(y).to_string(), b.src(y), b.end(y))));
    FiniteQuiver::new(a.base().clone(), arrows)
}

/// All paths of length ≤ n in A, including one length-0 path per vertex,
/// ordered by length then lexicographically.
pub fn paths_up_to(a: &FiniteQuiver, n: usize) -> Vec<PathValue> {
    let mut out: Vec<PathValue> = a.base().iter().map(PathValue::identity).collect();
    let mut layer = out.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &layer {
            let at = p.end(a);
            for x in a.from_vertex(at) {
                let mut arrows = p.arrows.clone();
                arrows.push(x);
                next.push(PathValue { src: p.src, arrows });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Connected components of A: the equivalence generated by arrows of DA.
/// Each class is sorted; classes are ordered by their least vertex.
pub fn connected_components(a: &FiniteQuiver) -> Vec<Vec<Vertex>> {
    let n = a.base().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for x in a.arrows() {
        let (r, s) = (find(&mut parent, a.src(x)), find(&mut parent, a.end(x)));
        // union by least representative keeps class order canonical
        if r != s {
            let (lo, hi) = (r.min(s), r.max(s));
            parent[hi] = lo;
        }
    }
    let mut classes: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    classes.into_values().collect()
}

/// τ(x,y) = (y,x), defined on composable pairs end(x) = src(y).
pub fn weak_symmetry_tau(
    q: &FiniteQuiver,
    pair: (SignedArrow, SignedArrow),
) -> Check<(SignedArrow, SignedArrow)> {
    let (x, y) = pair;
    if q.dend(x) != q.dsrc(y) {
        return Err(Violation::new("composable-pair", format!("tau({x},{y})")));
    }
    Ok((y, x))
}

/// μ(y,x) = (y⁻¹, x⁻¹), defined on pairs with src(y) = end(x).
pub fn weak_symmetry_mu(
    q: &FiniteQuiver,
    pair: (SignedArrow, SignedArrow),
) -> Check<(SignedArrow, SignedArrow)> {
    let (y, x) = pair;
    if q.dsrc(y) != q.dend(x) {
        return Err(Violation::new("composable-pair", format!("mu({y},{x})")));
    }
    Ok((y.inv(), x.inv()))
}

/// ϑ(y⁻¹, x⁻¹) = (x,y), defined on composable pairs of opposites.
pub fn weak_symmetry_theta(
    q: &FiniteQuiver,
    pair: (SignedArrow, SignedArrow),
) -> Check<(SignedArrow, SignedArrow)> {
    let (yi, xi) = pair;
    if q.dend(yi) != q.dsrc(xi) {
        return Err(Violation::new("composable-pair", format!("theta({yi},{xi})")));
    }
    Ok((xi.inv(), yi.inv()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fiber_product_l2_has_four_loops() {
        let l2 = fixtures::l2();
        let p = fiber_product(&l2, &l2).unwrap();
        assert_eq!(p.arrow_count(), 4);
        let ids: Vec<&str> = p.arrows().map(|a| p.id(a)).collect();
        assert_eq!(ids, vec!["(a,a)", "(a,b)", "(b,a)", "(b,b)"]);
    }

    #[test]
    fn fiber_product_k2_is_empty() {
        let k2 = fixtures::k2();
        assert_eq!(fiber_product(&k2, &k2).unwrap().arrow_count(), 0);
    }

    #[test]
    fn fiber_product_with_unit_has_matching_count() {
        let l2 = fixtures::l2();
        let u = unit_quiver(l2.base());
        let p = fiber_product(&l2, &u).unwrap();
        assert_eq!(p.arrow_count(), l2.arrow_count());
        let q = fiber_product(&u, &l2).unwrap();
        assert_eq!(q.arrow_count(), l2.arrow_count());
    }

    #[test]
    fn pair_count_formula() {
        for q in [fixtures::l2(), fixtures::k2(), fixtures::loop_bundle(&[2, 2])] {
            let mut expect = 0;
            for r in q.base().iter() {
                expect += q.into_vertex(r).len() * q.from_vertex(r).len();
            }
            assert_eq!(fiber_product(&q, &q).unwrap().arrow_count(), expect);
            assert_eq!(q.composable_pairs().len(), expect);
        }
    }

    #[test]
    fn opposite_involution() {
        for q in [fixtures::l2(), fixtures::k2()] {
            assert_eq!(opposite(&opposite(&q)), q);
        }
    }

    #[test]
    fn double_counts() {
        assert_eq!(double(&fixtures::k2()).arrow_count(), 2);
        assert_eq!(double(&fixtures::l2()).arrow_count(), 4);
        let d = double(&fixtures::k2());
        assert_eq!(d.id(1), "u^-1");
        assert_eq!(d.src(1), d.end(0));
    }

    #[test]
    fn paths_counts() {
        let k2 = fixtures::k2();
        assert_eq!(paths_up_to(&k2, 1).len(), 3); // id_p, id_q, u
        let l2 = fixtures::l2();
        assert_eq!(paths_up_to(&l2, 2).len(), 1 + 2 + 4);
        assert_eq!(paths_up_to(&l2, 0).len(), 1);
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&fixtures::k2()), vec![vec![0, 1]]);
        let lonely = FiniteQuiver::of(&["p", "q"], &[]);
        assert_eq!(connected_components(&lonely), vec![vec![0], vec![1]]);
        assert_eq!(connected_components(&fixtures::l2()), vec![vec![0]]);
    }

    #[test]
    fn weak_symmetry_triangle() {
        // ϑ ∘ μ ∘ τ = id on all composable pairs of L2 ⊗ L2
        let l2 = fixtures::l2();
        for (a, b) in l2.composable_pairs() {
            let pair = (SignedArrow::pos(a), SignedArrow::pos(b));
            let t = weak_symmetry_tau(&l2, pair).unwrap();
            let m = weak_symmetry_mu(&l2, t).unwrap();
            let th = weak_symmetry_theta(&l2, m).unwrap();
            assert_eq!(th, pair);
        }
    }

    #[test]
    fn signed_arrow_involution() {
        let x = SignedArrow::pos(3);
        assert_eq!(x.inv().inv(), x);
        let l2 = fixtures::l2();
        assert_eq!(l2.dsrc(SignedArrow::neg(0)), l2.dend(SignedArrow::pos(0)));
    }
}
