//! Matched pairs of groupoids and the structures equivalent to them:
//! diagonal groupoids with exact factorizations and vacant double
//! groupoids (boxes). Also representations of a matched pair, their
//! tensor and dual, LYZ pairs with the induced braiding, and the
//! tautological pair attached to a braided groupoid.

use crate::braided::BraidedGroupoid;
use crate::groupoid::{FiniteGroupoid, LeftAction};
use crate::quiver::{self, Arrow, FiniteQuiver, Vertex};
use crate::{Check, Violation};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A matched pair (V, H): V vertical (t = src, b = end), H horizontal
/// (l = src, r = end), with x⇀g ∈ V and x↼g ∈ H defined for r(x) = t(g).
#[derive(Debug, Clone)]
pub struct MatchedPair {
    pub v: FiniteGroupoid,
    pub h: FiniteGroupoid,
    lact: HashMap<(Arrow, Arrow), Arrow>,
    ract: HashMap<(Arrow, Arrow), Arrow>,
}

impl MatchedPair {
    /// Pairs (x, g) with r(x) = t(g), lexicographic.
    pub fn domain(&self) -> Vec<(Arrow, Arrow)> {
        let mut out = Vec::new();
        for x in self.h.arrows() {
            for g in self.v.arrows() {
                if self.h.end(x) == self.v.src(g) {
                    out.push((x, g));
                }
            }
        }
        out
    }

    /// x⇀g.
    pub fn lact(&self, x: Arrow, g: Arrow) -> Arrow {
        self.lact[&(x, g)]
    }

    /// x↼g.
    pub fn ract(&self, x: Arrow, g: Arrow) -> Arrow {
        self.ract[&(x, g)]
    }

    pub fn lact_table(&self) -> &HashMap<(Arrow, Arrow), Arrow> {
        &self.lact
    }

    pub fn ract_table(&self) -> &HashMap<(Arrow, Arrow), Arrow> {
        &self.ract
    }
}

/// Validate the matched-pair axioms: both maps are actions with the right
/// fibering, plus the compatibilities relating them.
pub fn check_matched_pair(
    v: &FiniteGroupoid,
    h: &FiniteGroupoid,
    lact: &HashMap<(Arrow, Arrow), Arrow>,
    ract: &HashMap<(Arrow, Arrow), Arrow>,
) -> Check<MatchedPair> {
    if v.base() != h.base() {
        return Err(Violation::new("same-base", "V and H live over different bases"));
    }
    let mp = MatchedPair { v: v.clone(), h: h.clone(), lact: lact.clone(), ract: ract.clone() };
    let dom = mp.domain();
    if lact.len() != dom.len() || ract.len() != dom.len() {
        return Err(Violation::new("action-total", "tables do not match the (r,t) domain"));
    }
    let wit = |x: Arrow, g: Arrow| format!("({},{})", h.id(x), v.id(g));
    for &(x, g) in &dom {
        let (Some(&xg), Some(&xr)) = (lact.get(&(x, g)), ract.get(&(x, g))) else {
            return Err(Violation::new("action-total", wit(x, g)));
        };
        if v.src(xg) != h.src(x) {
            return Err(Violation::new("lact-fiber", wit(x, g)));
        }
        if h.end(xr) != v.end(g) {
            return Err(Violation::new("ract-fiber", wit(x, g)));
        }
        // b(x⇀g) = l(x↼g)
        if v.end(xg) != h.src(xr) {
            return Err(Violation::new("mp-corner", wit(x, g)));
        }
    }
    for g in v.arrows() {
        let e = h.identity_at(v.src(g));
        if mp.lact(e, g) != g {
            return Err(Violation::new("lact-unit", v.id(g).to_string()));
        }
    }
    for x in h.arrows() {
        let e = v.identity_at(h.end(x));
        if mp.ract(x, e) != x {
            return Err(Violation::new("ract-unit", h.id(x).to_string()));
        }
    }
    for (x, y) in h.composable_pairs() {
        for g in v.arrows() {
            if h.end(y) != v.src(g) {
                continue;
            }
            if mp.lact(h.compose(x, y), g) != mp.lact(x, mp.lact(y, g)) {
                return Err(Violation::new(
                    "lact-associative",
                    format!("({},{},{})", h.id(x), h.id(y), v.id(g)),
                ));
            }
            // xy↼g = (x↼(y⇀g))(y↼g)
            let lhs = mp.ract(h.compose(x, y), g);
            let rhs = h.compose(mp.ract(x, mp.lact(y, g)), mp.ract(y, g));
            if lhs != rhs {
                return Err(Violation::new(
                    "mp-right-compat",
                    format!("({},{},{})", h.id(x), h.id(y), v.id(g)),
                ));
            }
        }
    }
    for (f, g) in v.composable_pairs() {
        for x in h.arrows() {
            if h.end(x) != v.src(f) {
                continue;
            }
            if mp.ract(mp.ract(x, f), g) != mp.ract(x, v.compose(f, g)) {
                return Err(Violation::new(
                    "ract-associative",
                    format!("({},{},{})", h.id(x), v.id(f), v.id(g)),
                ));
            }
            // x⇀fg = (x⇀f)((x↼f)⇀g)
            let lhs = mp.lact(x, v.compose(f, g));
            let rhs = v.compose(mp.lact(x, f), mp.lact(mp.ract(x, f), g));
            if lhs != rhs {
                return Err(Violation::new(
                    "mp-left-compat",
                    format!("({},{},{})", h.id(x), v.id(f), v.id(g)),
                ));
            }
        }
    }
    Ok(mp)
}

/// Matched pair with trivial actions between two groupoids over the same
/// base whose trivial actions are compatible (e.g. group bundles or any
/// groupoid with itself when one side acts trivially and both are abelian).
pub fn trivial_matched_pair(v: &FiniteGroupoid, h: &FiniteGroupoid) -> Check<MatchedPair> {
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for x in h.arrows() {
        for g in v.arrows() {
            if h.end(x) == v.src(g) {
                lact.insert((x, g), g);
                ract.insert((x, g), x);
            }
        }
    }
    check_matched_pair(v, h, &lact, &ract)
}

/// The diagonal groupoid V⋈H on pairs (f, y) with b(f) = l(y),
/// (f,y)(h,z) = (f(y⇀h), (y↼h)z), plus the exact-factorization data.
#[derive(Debug, Clone)]
pub struct DiagonalGroupoid {
    pub groupoid: FiniteGroupoid,
    /// arrow of the diagonal → its (V-arrow, H-arrow) pair
    pub pairs: Vec<(Arrow, Arrow)>,
    /// V-arrow f → arrow (f, id b(f))
    pub embed_v: Vec<Arrow>,
    /// H-arrow y → arrow (id l(y), y)
    pub embed_h: Vec<Arrow>,
}

impl DiagonalGroupoid {
    pub fn pair_index(&self, f: Arrow, y: Arrow) -> Arrow {
        self.pairs.iter().position(|&p| p == (f, y)).expect("pair in diagonal")
    }
}

pub fn diagonal_groupoid(mp: &MatchedPair) -> Check<DiagonalGroupoid> {
    let (v, h) = (&mp.v, &mp.h);
    let mut pairs = Vec::new();
    for f in v.arrows() {
        for y in h.arrows() {
            if v.end(f) == h.src(y) {
                pairs.push((f, y));
            }
        }
    }
    let index: HashMap<(Arrow, Arrow), Arrow> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let arrows: Vec<(String, Vertex, Vertex)> = pairs
        .iter()
        .map(|&(f, y)| (format!("({},{})", v.id(f), h.id(y)), v.src(f), h.end(y)))
        .collect();
    let quiver = FiniteQuiver::new(v.base().clone(), arrows)?;
    let identity: Vec<Arrow> =
        v.base().iter().map(|p| index[&(v.identity_at(p), h.identity_at(p))]).collect();
    let mut compose = HashMap::new();
    for (&(f, y), &i) in &index {
        for (&(g, z), &j) in &index {
            if h.end(y) != v.src(g) {
                continue;
            }
            let k = index[&(v.compose(f, mp.lact(y, g)), h.compose(mp.ract(y, g), z))];
            compose.insert((i, j), k);
        }
    }
    // inverses by table search; existence is part of the construction
    let mut inverse = vec![usize::MAX; pairs.len()];
    for i in 0..pairs.len() {
        let p = quiver.src(i);
        for j in 0..pairs.len() {
            if compose.get(&(i, j)) == Some(&identity[p]) {
                inverse[i] = j;
            }
        }
        if inverse[i] == usize::MAX {
            return Err(Violation::new("diagonal-inverse", quiver.id(i).to_string()));
        }
    }
    let groupoid = FiniteGroupoid::new(quiver, identity, compose, inverse)?;
    let embed_v: Vec<Arrow> = v.arrows().map(|f| index[&(f, h.identity_at(v.end(f)))]).collect();
    let embed_h: Vec<Arrow> = h.arrows().map(|y| index[&(v.identity_at(h.src(y)), y)]).collect();
    // exact factorization: multiplication V × H → D hits each arrow once
    let mut seen = vec![false; pairs.len()];
    for f in v.arrows() {
        for y in h.arrows() {
            if v.end(f) == h.src(y) {
                let d = groupoid.compose(embed_v[f], embed_h[y]);
                if seen[d] {
                    return Err(Violation::new("exact-factorization", groupoid.id(d).to_string()));
                }
                seen[d] = true;
            }
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err(Violation::new("exact-factorization", "multiplication not onto"));
    }
    Ok(DiagonalGroupoid { groupoid, pairs, embed_v, embed_h })
}

/// Recover the matched pair from an exact factorization: V, H wide
/// subgroupoids of D such that every arrow factors uniquely as fy; the
/// actions solve xg = (x⇀g)(x↼g).
pub fn from_exact_factorization(
    d: &FiniteGroupoid,
    v_arrows: &BTreeSet<Arrow>,
    h_arrows: &BTreeSet<Arrow>,
) -> Check<MatchedPair> {
    let v = d.restrict(v_arrows)?;
    let h = d.restrict(h_arrows)?;
    // factor: D-arrow → unique (f, y) with f ∈ V, y ∈ H, α = fy
    let mut factor: HashMap<Arrow, (Arrow, Arrow)> = HashMap::new();
    for &f in v_arrows {
        for &y in h_arrows {
            if d.end(f) != d.src(y) {
                continue;
            }
            let a = d.compose(f, y);
            if factor.insert(a, (f, y)).is_some() {
                return Err(Violation::new(
                    "exact-factorization",
                    format!("{} factors twice", d.id(a)),
                ));
            }
        }
    }
    if factor.len() != d.arrows().count() {
        return Err(Violation::new("exact-factorization", "some arrow has no factorization"));
    }
    // local index translation D-arrow → index in the restricted groupoid
    let vi: HashMap<Arrow, Arrow> = v_arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let hi: HashMap<Arrow, Arrow> = h_arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let vlist: Vec<Arrow> = v_arrows.iter().copied().collect();
    let hlist: Vec<Arrow> = h_arrows.iter().copied().collect();
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (xi_local, &x) in hlist.iter().enumerate() {
        for (gi_local, &g) in vlist.iter().enumerate() {
            if d.end(x) != d.src(g) {
                continue;
            }
            let (f, y) = factor[&d.compose(x, g)];
            lact.insert((xi_local, gi_local), vi[&f]);
            ract.insert((xi_local, gi_local), hi[&y]);
        }
    }
    check_matched_pair(&v, &h, &lact, &ract)
}

/// The vacant double groupoid of a matched pair: boxes are the domain
/// pairs (x, g) with sides top x, left x⇀g, right g, bottom x↼g. Both the
/// horizontal groupoid over V and the vertical groupoid over H are built
/// and validated.
#[derive(Debug, Clone)]
pub struct VacantBoxes {
    pub boxes: Vec<(Arrow, Arrow)>,
    /// boxes as a groupoid over the V-arrows: src = left, end = right
    pub horizontal: FiniteGroupoid,
    /// boxes as a groupoid over the H-arrows: src = top, end = bottom
    pub vertical: FiniteGroupoid,
}

impl VacantBoxes {
    pub fn box_index(&self, x: Arrow, g: Arrow) -> Arrow {
        self.boxes.iter().position(|&b| b == (x, g)).expect("box")
    }
}

pub fn vacant_boxes(mp: &MatchedPair) -> Check<VacantBoxes> {
    let (v, h) = (&mp.v, &mp.h);
    let boxes = mp.domain();
    let index: HashMap<(Arrow, Arrow), Arrow> =
        boxes.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let names: Vec<(String, Arrow, Arrow)> = boxes
        .iter()
        .map(|&(x, g)| (format!("[{}|{}]", h.id(x), v.id(g)), x, g))
        .collect();

    // horizontal: base = V-arrow ids, (x,g)(y,h) = (xy,h) when g = y⇀h
    let vbase = quiver::VertexSet::new(v.arrows().map(|a| v.id(a).to_string()).collect())?;
    let harrows: Vec<(String, Vertex, Vertex)> =
        names.iter().map(|&(ref n, x, g)| (n.clone(), mp.lact(x, g), g)).collect();
    let hquiver = FiniteQuiver::new(vbase, harrows)?;
    let hident: Vec<Arrow> = v.arrows().map(|g| index[&(h.identity_at(v.src(g)), g)]).collect();
    let mut hcomp = HashMap::new();
    for (&(x, g), &i) in &index {
        for (&(y, hh), &j) in &index {
            if g == mp.lact(y, hh) {
                hcomp.insert((i, j), index[&(h.compose(x, y), hh)]);
            }
        }
    }
    let hinv: Vec<Arrow> = boxes.iter().map(|&(x, g)| index[&(h.inverse(x), mp.lact(x, g))]).collect();
    let horizontal = FiniteGroupoid::new(hquiver, hident, hcomp, hinv)?;
    horizontal.validate()?;

    // vertical: base = H-arrow ids, (x,g)(x',g') = (x,gg') when x↼g = x'
    let hbase = quiver::VertexSet::new(h.arrows().map(|a| h.id(a).to_string()).collect())?;
    let varrows: Vec<(String, Vertex, Vertex)> =
        names.iter().map(|&(ref n, x, g)| (n.clone(), x, mp.ract(x, g))).collect();
    let vquiver = FiniteQuiver::new(hbase, varrows)?;
    let vident: Vec<Arrow> = h.arrows().map(|x| index[&(x, v.identity_at(h.end(x)))]).collect();
    let mut vcomp = HashMap::new();
    for (&(x, g), &i) in &index {
        for (&(x2, g2), &j) in &index {
            if mp.ract(x, g) == x2 {
                vcomp.insert((i, j), index[&(x, v.compose(g, g2))]);
            }
        }
    }
    let vinv: Vec<Arrow> = boxes.iter().map(|&(x, g)| index[&(mp.ract(x, g), v.inverse(g))]).collect();
    let vertical = FiniteGroupoid::new(vquiver, vident, vcomp, vinv)?;
    vertical.validate()?;

    Ok(VacantBoxes { boxes, horizontal, vertical })
}

/// The box inverting all four sides: (x,g) ↦ ((x↼g)⁻¹, (x⇀g)⁻¹), whose
/// left side is g⁻¹ and bottom side is x⁻¹.
pub fn box_inverse(mp: &MatchedPair, b: (Arrow, Arrow)) -> (Arrow, Arrow) {
    let (x, g) = b;
    (mp.h.inverse(mp.ract(x, g)), mp.v.inverse(mp.lact(x, g)))
}

/// A representation of a matched pair: a quiver graded by V with an action
/// of H on the source fibration, compatible with the grading.
#[derive(Debug, Clone)]
pub struct Representation {
    pub mp: MatchedPair,
    pub quiver: FiniteQuiver,
    act: HashMap<(Arrow, Arrow), Arrow>,
    grading: Vec<Arrow>,
}

impl Representation {
    /// x⇀a for r(x) = 𝔰(a).
    pub fn act(&self, x: Arrow, a: Arrow) -> Arrow {
        self.act[&(x, a)]
    }

    /// |a| ∈ V.
    pub fn grade(&self, a: Arrow) -> Arrow {
        self.grading[a]
    }

    pub fn act_table(&self) -> &HashMap<(Arrow, Arrow), Arrow> {
        &self.act
    }

    pub fn grading(&self) -> &[Arrow] {
        &self.grading
    }
}

pub fn check_representation(
    mp: &MatchedPair,
    a: &FiniteQuiver,
    act: &HashMap<(Arrow, Arrow), Arrow>,
    grading: &[Arrow],
) -> Check<Representation> {
    let (v, h) = (&mp.v, &mp.h);
    if a.base() != v.base() {
        return Err(Violation::new("same-base", "representation over a different base"));
    }
    if grading.len() != a.arrow_count() {
        return Err(Violation::new("grading-total", "grading length mismatch"));
    }
    for x in a.arrows() {
        let g = grading[x];
        if v.src(g) != a.src(x) || v.end(g) != a.end(x) {
            return Err(Violation::new("grading-morphism", a.id(x).to_string()));
        }
    }
    let mut dom = 0usize;
    for x in h.arrows() {
        for b in a.arrows() {
            if h.end(x) != a.src(b) {
                continue;
            }
            dom += 1;
            let Some(&xb) = act.get(&(x, b)) else {
                return Err(Violation::new("action-total", format!("({},{})", h.id(x), a.id(b))));
            };
            if a.src(xb) != h.src(x) {
                return Err(Violation::new("action-fiber", format!("({},{})", h.id(x), a.id(b))));
            }
            // |x⇀a| = x⇀|a|
            if grading[xb] != mp.lact(x, grading[b]) {
                return Err(Violation::new(
                    "grading-compatibility",
                    format!("({},{})", h.id(x), a.id(b)),
                ));
            }
        }
    }
    if act.len() != dom {
        return Err(Violation::new("action-total", "spurious table entries"));
    }
    for b in a.arrows() {
        if act[&(h.identity_at(a.src(b)), b)] != b {
            return Err(Violation::new("action-unit", a.id(b).to_string()));
        }
    }
    for (x, y) in h.composable_pairs() {
        for b in a.arrows() {
            if h.end(y) != a.src(b) {
                continue;
            }
            if act[&(h.compose(x, y), b)] != act[&(x, act[&(y, b)])] {
                return Err(Violation::new(
                    "action-associative",
                    format!("({},{},{})", h.id(x), h.id(y), a.id(b)),
                ));
            }
        }
    }
    Ok(Representation {
        mp: mp.clone(),
        quiver: a.clone(),
        act: act.clone(),
        grading: grading.to_vec(),
    })
}

/// Tensor product of representations: quiver A ⊗ B with
/// x⇀(a,b) = (x⇀a, (x↼|a|)⇀b) and |(a,b)| = |a||b|.
pub fn tensor_representation(r1: &Representation, r2: &Representation) -> Check<Representation> {
    let mp = &r1.mp;
    let q = quiver::fiber_product(&r1.quiver, &r2.quiver)?;
    // fiber_product enumerates pairs in the same lexicographic order
    let mut pairs = Vec::new();
    for a in r1.quiver.arrows() {
        for b in r2.quiver.arrows() {
            if r1.quiver.end(a) == r2.quiver.src(b) {
                pairs.push((a, b));
            }
        }
    }
    let index: HashMap<(Arrow, Arrow), Arrow> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let grading: Vec<Arrow> =
        pairs.iter().map(|&(a, b)| mp.v.compose(r1.grade(a), r2.grade(b))).collect();
    let mut act = HashMap::new();
    for x in mp.h.arrows() {
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mp.h.end(x) != r1.quiver.src(a) {
                continue;
            }
            let xa = r1.act(x, a);
            let xb = r2.act(mp.ract(x, r1.grade(a)), b);
            act.insert((x, i), index[&(xa, xb)]);
        }
    }
    check_representation(mp, &q, &act, &grading)
}

/// Dual representation on A^op: x⇀a⁻¹ = ((x↼|a|⁻¹)⇀a)⁻¹, |a⁻¹| = |a|⁻¹.
pub fn dual_representation(r: &Representation) -> Check<Representation> {
    let mp = &r.mp;
    let op = quiver::opposite(&r.quiver);
    let grading: Vec<Arrow> = r.grading.iter().map(|&g| mp.v.inverse(g)).collect();
    let mut act = HashMap::new();
    for x in mp.h.arrows() {
        for a in op.arrows() {
            if mp.h.end(x) != op.src(a) {
                continue;
            }
            let y = mp.ract(x, mp.v.inverse(r.grade(a)));
            act.insert((x, a), r.act(y, a));
        }
    }
    check_representation(mp, &op, &act, &grading)
}

/// View a representation as a left action of the box groupoid 𝔅 ⇉ V on
/// the fibered set |·|: A → V, by (x, g)⇀a = x⇀a when g = |a|.
pub fn representation_as_box_action(
    r: &Representation,
    boxes: &VacantBoxes,
) -> Check<LeftAction> {
    let fibered = crate::groupoid::FiberedSet {
        ids: r.quiver.arrows().map(|a| r.quiver.id(a).to_string()).collect(),
        fiber_of: r.grading.clone(),
    };
    let mut table = HashMap::new();
    for (i, &(x, g)) in boxes.boxes.iter().enumerate() {
        for a in r.quiver.arrows() {
            if r.grade(a) == g {
                table.insert((i, a), r.act(x, a));
            }
        }
    }
    let act = LeftAction { fibered, table };
    act.validate(&boxes.horizontal)?;
    Ok(act)
}

/// An LYZ pair: two rotations ξ, η: V → H satisfying the joint condition
/// η(g)⇀f = gf(ξ(f)⁻¹⇀g⁻¹).
#[derive(Debug, Clone)]
pub struct LyzPair {
    pub mp: MatchedPair,
    pub xi: Vec<Arrow>,
    pub eta: Vec<Arrow>,
}

/// Rotation test: κ is a groupoid morphism V → H over the base with
/// yκ(g) = κ(y⇀g)(y↼g) whenever r(y) = t(g).
pub fn check_rotation(mp: &MatchedPair, kappa: &[Arrow]) -> Check<()> {
    let (v, h) = (&mp.v, &mp.h);
    if kappa.len() != v.arrows().count() {
        return Err(Violation::new("rotation-total", "map length mismatch"));
    }
    for g in v.arrows() {
        let k = kappa[g];
        if h.src(k) != v.src(g) || h.end(k) != v.end(g) {
            return Err(Violation::new("rotation-endpoints", v.id(g).to_string()));
        }
    }
    for (f, g) in v.composable_pairs() {
        if kappa[v.compose(f, g)] != h.compose(kappa[f], kappa[g]) {
            return Err(Violation::new(
                "rotation-multiplicative",
                format!("({},{})", v.id(f), v.id(g)),
            ));
        }
    }
    for y in h.arrows() {
        for g in v.arrows() {
            if h.end(y) != v.src(g) {
                continue;
            }
            let lhs = h.compose(y, kappa[g]);
            let rhs = h.compose(kappa[mp.lact(y, g)], mp.ract(y, g));
            if lhs != rhs {
                return Err(Violation::new("rotation", format!("({},{})", h.id(y), v.id(g))));
            }
        }
    }
    Ok(())
}

pub fn check_lyz_pair(mp: &MatchedPair, xi: &[Arrow], eta: &[Arrow]) -> Check<LyzPair> {
    check_rotation(mp, xi).map_err(|e| Violation::new("xi-rotation", e.witness))?;
    check_rotation(mp, eta).map_err(|e| Violation::new("eta-rotation", e.witness))?;
    let v = &mp.v;
    for (g, f) in v.composable_pairs() {
        // η(g)⇀f = gf(ξ(f)⁻¹⇀g⁻¹)
        let lhs = mp.lact(eta[g], f);
        let tail = mp.lact(mp.h.inverse(xi[f]), v.inverse(g));
        let rhs = v.product(v.src(g), &[g, f, tail]);
        if lhs != rhs {
            return Err(Violation::new("lyz-compat", format!("({},{})", v.id(g), v.id(f))));
        }
    }
    Ok(LyzPair { mp: mp.clone(), xi: xi.to_vec(), eta: eta.to_vec() })
}

/// The braiding of Rep(V,H) induced by an LYZ pair:
/// σ(a,b) = (η(|a|)⇀b, (ξ(|b|)⁻¹↼|a|⁻¹)⇀a) on A ⊗ B.
pub fn braiding_from_lyz(
    lyz: &LyzPair,
    r1: &Representation,
    r2: &Representation,
) -> BTreeMap<(Arrow, Arrow), (Arrow, Arrow)> {
    let mp = &lyz.mp;
    let mut out = BTreeMap::new();
    for a in r1.quiver.arrows() {
        for b in r2.quiver.arrows() {
            if r1.quiver.end(a) != r2.quiver.src(b) {
                continue;
            }
            let u = r2.act(lyz.eta[r1.grade(a)], b);
            let x = mp.ract(mp.h.inverse(lyz.xi[r2.grade(b)]), mp.v.inverse(r1.grade(a)));
            let w = r1.act(x, a);
            out.insert((a, b), (u, w));
        }
    }
    out
}

/// The inverse braiding table, with ξ and η exchanged.
pub fn inverse_braiding_from_lyz(
    lyz: &LyzPair,
    r1: &Representation,
    r2: &Representation,
) -> BTreeMap<(Arrow, Arrow), (Arrow, Arrow)> {
    let swapped = LyzPair { mp: lyz.mp.clone(), xi: lyz.eta.clone(), eta: lyz.xi.clone() };
    braiding_from_lyz(&swapped, r1, r2)
}

/// The tautological matched pair (G, G⋈G) of a braided groupoid, with
/// (g,h)↪f = g⇁(h⇀f) and (g,h)↩f = (g⇃(h⇀f), h↼f), together with its
/// LYZ pair (in₁, in₂). Everything is re-verified.
pub fn tautological_pair(b: &BraidedGroupoid) -> Check<(MatchedPair, DiagonalGroupoid, LyzPair)> {
    let g = b.groupoid();
    let self_mp = check_matched_pair(g, g, b.lact_table(), b.ract_table())?;
    let diag = diagonal_groupoid(&self_mp)?;
    let d = &diag.groupoid;
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (i, &(p, q)) in diag.pairs.iter().enumerate() {
        for f in g.arrows() {
            if d.end(i) != g.src(f) {
                continue;
            }
            let hf = b.lact(q, f);
            lact.insert((i, f), b.dn_lact(p, hf));
            ract.insert((i, f), diag.pair_index(b.dn_ract(p, hf), b.ract(q, f)));
        }
    }
    let mp = check_matched_pair(g, d, &lact, &ract)?;
    let in1: Vec<Arrow> =
        g.arrows().map(|f| diag.pair_index(f, g.identity_at(g.end(f)))).collect();
    let in2: Vec<Arrow> =
        g.arrows().map(|f| diag.pair_index(g.identity_at(g.src(f)), f)).collect();
    let lyz = check_lyz_pair(&mp, &in1, &in2)?;
    Ok((mp, diag, lyz))
}

/// The alternative matched-pair structure on (G, G⋈G) with
/// (g,h)↪f = gh⇀f and (g,h)↩f = (g↼(h⇀f), h↼f).
pub fn alternative_tautological_pair(b: &BraidedGroupoid) -> Check<MatchedPair> {
    let g = b.groupoid();
    let self_mp = check_matched_pair(g, g, b.lact_table(), b.ract_table())?;
    let diag = diagonal_groupoid(&self_mp)?;
    let d = &diag.groupoid;
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (i, &(p, q)) in diag.pairs.iter().enumerate() {
        for f in g.arrows() {
            if d.end(i) != g.src(f) {
                continue;
            }
            let hf = b.lact(q, f);
            lact.insert((i, f), b.lact(g.compose(p, q), f));
            ract.insert((i, f), diag.pair_index(b.ract(p, hf), b.ract(q, f)));
        }
    }
    check_matched_pair(g, d, &lact, &ract)
}

/// The representation of the tautological pair on the quiver of G itself:
/// grading is the identity and the action is ↪.
pub fn tautological_representation(b: &BraidedGroupoid, mp: &MatchedPair) -> Check<Representation> {
    let g = b.groupoid();
    let grading: Vec<Arrow> = g.arrows().collect();
    check_representation(mp, g.quiver(), mp.lact_table(), &grading)
}
