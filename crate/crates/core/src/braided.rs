//! Braided groupoids: groupoids matched with themselves so that
//! multiplication factors through the actions. Includes the equivalent
//! cocycle datum, the gamma bundles and braided quotients, the restricted
//! product of a matched pair, and the reduced structure groupoid of a
//! non-degenerate solution together with the reconstruction of the
//! solution from its structural pair.

use crate::groupoid::{
    is_normal_bundle, BundleRightAction, FiniteGroupoid, GroupBundle, GroupoidMorphism,
};
use crate::matched::{check_matched_pair, diagonal_groupoid, MatchedPair};
use crate::quiver::{Arrow, FiniteQuiver, PathValue, Vertex};
use crate::solution::{
    check_nondegenerate, check_solution, double_solution, path_sigma, NonDegenerateSolution,
};
use crate::{Check, Violation};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A groupoid with a braiding: f⇀g and f↼g for e(f) = s(g), forming a
/// matched pair of the groupoid with itself and satisfying
/// fg = (f⇀g)(f↼g). The induced map σ(f,g) = (f⇀g, f↼g) is kept as a
/// verified non-degenerate solution.
#[derive(Debug, Clone)]
pub struct BraidedGroupoid {
    g: FiniteGroupoid,
    sol: NonDegenerateSolution,
    lact: HashMap<(Arrow, Arrow), Arrow>,
    ract: HashMap<(Arrow, Arrow), Arrow>,
}

impl BraidedGroupoid {
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.g
    }

    /// The induced solution on the underlying quiver.
    pub fn solution(&self) -> &NonDegenerateSolution {
        &self.sol
    }

    pub fn lact(&self, f: Arrow, g: Arrow) -> Arrow {
        self.lact[&(f, g)]
    }

    pub fn ract(&self, f: Arrow, g: Arrow) -> Arrow {
        self.ract[&(f, g)]
    }

    /// f⇁g, the first component of σ⁻¹.
    pub fn dn_lact(&self, f: Arrow, g: Arrow) -> Arrow {
        self.sol.dn_lact(f, g)
    }

    /// f⇃g, the second component of σ⁻¹.
    pub fn dn_ract(&self, f: Arrow, g: Arrow) -> Arrow {
        self.sol.dn_ract(f, g)
    }

    pub fn lact_table(&self) -> &HashMap<(Arrow, Arrow), Arrow> {
        &self.lact
    }

    pub fn ract_table(&self) -> &HashMap<(Arrow, Arrow), Arrow> {
        &self.ract
    }
}

/// Validate a braided structure: both maps total on composable pairs,
/// multiplication factors as fg = (f⇀g)(f↼g), the pair (G, G) is matched,
/// and the induced σ is a non-degenerate solution.
pub fn check_braided_groupoid(
    g: &FiniteGroupoid,
    lact: &HashMap<(Arrow, Arrow), Arrow>,
    ract: &HashMap<(Arrow, Arrow), Arrow>,
) -> Check<BraidedGroupoid> {
    for (f, h) in g.composable_pairs() {
        let (Some(&fl), Some(&fr)) = (lact.get(&(f, h)), ract.get(&(f, h))) else {
            return Err(Violation::new("action-total", format!("({},{})", g.id(f), g.id(h))));
        };
        if g.end(fl) != g.src(fr) || g.compose(fl, fr) != g.compose(f, h) {
            return Err(Violation::new(
                "braided-factorization",
                format!("({},{})", g.id(f), g.id(h)),
            ));
        }
    }
    check_matched_pair(g, g, lact, ract)?;
    let mut table = BTreeMap::new();
    for (f, h) in g.composable_pairs() {
        table.insert((f, h), (lact[&(f, h)], ract[&(f, h)]));
    }
    let sol = check_solution(g.quiver(), &table)?;
    let sol = check_nondegenerate(&sol)?;
    Ok(BraidedGroupoid { g: g.clone(), sol, lact: lact.clone(), ract: ract.clone() })
}

/// Derive the right action from a left action via f↼g = (f⇀g)⁻¹fg and
/// validate the result.
pub fn braided_from_left_action(
    g: &FiniteGroupoid,
    lact: &HashMap<(Arrow, Arrow), Arrow>,
) -> Check<BraidedGroupoid> {
    let mut ract = HashMap::new();
    for (f, h) in g.composable_pairs() {
        let Some(&fl) = lact.get(&(f, h)) else {
            return Err(Violation::new("action-total", format!("({},{})", g.id(f), g.id(h))));
        };
        ract.insert((f, h), g.compose(g.compose(g.inverse(fl), f), h));
    }
    check_braided_groupoid(g, lact, &ract)
}

/// Derive the left action from a right action via f⇀g = fg(f↼g)⁻¹.
pub fn braided_from_right_action(
    g: &FiniteGroupoid,
    ract: &HashMap<(Arrow, Arrow), Arrow>,
) -> Check<BraidedGroupoid> {
    let mut lact = HashMap::new();
    for (f, h) in g.composable_pairs() {
        let Some(&fr) = ract.get(&(f, h)) else {
            return Err(Violation::new("action-total", format!("({},{})", g.id(f), g.id(h))));
        };
        lact.insert((f, h), g.compose(g.compose(f, h), g.inverse(fr)));
    }
    check_braided_groupoid(g, &lact, ract)
}

/// The flip braiding f⇀g = g, f↼g = f; valid exactly on abelian-enough
/// groupoids (all hom sets forced by the corner conditions).
pub fn flip_braided(g: &FiniteGroupoid) -> Check<BraidedGroupoid> {
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (f, h) in g.composable_pairs() {
        lact.insert((f, h), h);
        ract.insert((f, h), f);
    }
    check_braided_groupoid(g, &lact, &ract)
}

/// The conjugation braiding f⇀g = fgf⁻¹, f↼g = f; valid on any group
/// bundle.
pub fn conjugation_braided(g: &FiniteGroupoid) -> Check<BraidedGroupoid> {
    let mut lact = HashMap::new();
    for (f, h) in g.composable_pairs() {
        lact.insert((f, h), g.compose(g.compose(f, h), g.inverse(f)));
    }
    braided_from_left_action(g, &lact)
}

/// The inverse braiding (G, ⇁, ⇃), again a braided groupoid.
pub fn antipode_braided(b: &BraidedGroupoid) -> Check<BraidedGroupoid> {
    let g = b.groupoid();
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (f, h) in g.composable_pairs() {
        lact.insert((f, h), b.dn_lact(f, h));
        ract.insert((f, h), b.dn_ract(f, h));
    }
    check_braided_groupoid(g, &lact, &ract)
}

/// The datum equivalent to a braided groupoid: a group bundle N over the
/// base, a right action of G on N by bundle automorphisms, and a bijective
/// 1-cocycle π: G → N with p(π(f)) = e(f) and π(fg) = (π(f)↼g)π(g).
#[derive(Debug, Clone)]
pub struct CocycleDatum {
    pub g: FiniteGroupoid,
    pub n: GroupBundle,
    /// G-arrow → N-arrow
    pub pi: Vec<Arrow>,
    pub act: BundleRightAction,
}

pub fn check_cocycle_datum(
    g: &FiniteGroupoid,
    n: &GroupBundle,
    pi: &[Arrow],
    act: &BundleRightAction,
) -> Check<CocycleDatum> {
    let ng = n.groupoid();
    if ng.base() != g.base() {
        return Err(Violation::new("same-base", "bundle over a different base"));
    }
    act.validate(g, n)?;
    if pi.len() != g.arrow_count() || ng.arrow_count() != g.arrow_count() {
        return Err(Violation::new("cocycle-bijective", "size mismatch"));
    }
    let seen: BTreeSet<Arrow> = pi.iter().copied().collect();
    if seen.len() != pi.len() {
        return Err(Violation::new("cocycle-bijective", "pi is not injective"));
    }
    for f in g.arrows() {
        if ng.src(pi[f]) != g.end(f) {
            return Err(Violation::new("cocycle-fiber", g.id(f).to_string()));
        }
    }
    for (f, h) in g.composable_pairs() {
        let lhs = pi[g.compose(f, h)];
        let rhs = ng.compose(act.act(pi[f], h), pi[h]);
        if lhs != rhs {
            return Err(Violation::new("cocycle", format!("({},{})", g.id(f), g.id(h))));
        }
    }
    Ok(CocycleDatum { g: g.clone(), n: n.clone(), pi: pi.to_vec(), act: act.clone() })
}

/// Extract the datum from a braided groupoid: N is the kernel of the
/// multiplication G⋈G → G, π(f) = (f⁻¹, f), and the action is the
/// restriction of conjugation by the first embedding.
pub fn to_cocycle_datum(b: &BraidedGroupoid) -> Check<CocycleDatum> {
    let g = b.groupoid();
    let mp = check_matched_pair(g, g, b.lact_table(), b.ract_table())?;
    let diag = diagonal_groupoid(&mp)?;
    let d = &diag.groupoid;
    let mult: Vec<Arrow> = diag.pairs.iter().map(|&(f, y)| g.compose(f, y)).collect();
    let mult = GroupoidMorphism::new(d.clone(), g.clone(), mult)?;
    let kernel = mult.kernel();
    let embed: Vec<Arrow> = kernel.iter().copied().collect();
    let local: HashMap<Arrow, Arrow> = embed.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let n = GroupBundle::new(d.restrict(&kernel)?)?;
    let pi: Vec<Arrow> =
        g.arrows().map(|f| local[&diag.pair_index(g.inverse(f), f)]).collect();
    let mut table = HashMap::new();
    for (i, &da) in embed.iter().enumerate() {
        for f in g.arrows() {
            if n.groupoid().src(i) == g.src(f) {
                let i1 = diag.embed_v[f];
                let conj = d.compose(d.compose(d.inverse(i1), da), i1);
                table.insert((i, f), local[&conj]);
            }
        }
    }
    let act = BundleRightAction { table };
    let datum = check_cocycle_datum(g, &n, &pi, &act)?;
    // π intertwines the actions: π(f↼g) = π(f)↼g
    for (f, h) in g.composable_pairs() {
        if datum.pi[b.ract(f, h)] != act.act(datum.pi[f], h) {
            return Err(Violation::new(
                "cocycle-intertwines",
                format!("({},{})", g.id(f), g.id(h)),
            ));
        }
    }
    Ok(datum)
}

/// Rebuild the braided groupoid from a datum: f↼g = π⁻¹(π(f)↼g) and
/// f⇀g = fg(f↼g)⁻¹.
pub fn from_cocycle_datum(datum: &CocycleDatum) -> Check<BraidedGroupoid> {
    let g = &datum.g;
    let mut pi_inv = vec![usize::MAX; datum.pi.len()];
    for (f, &m) in datum.pi.iter().enumerate() {
        pi_inv[m] = f;
    }
    let mut ract = HashMap::new();
    for (f, h) in g.composable_pairs() {
        ract.insert((f, h), pi_inv[datum.act.act(datum.pi[f], h)]);
    }
    braided_from_right_action(g, &ract)
}

/// σ² = id, equivalently N abelian; both are computed and must agree.
pub fn is_symmetric(b: &BraidedGroupoid) -> Check<bool> {
    let involutive = b.solution().is_involutive();
    let datum = to_cocycle_datum(b)?;
    let ng = datum.n.groupoid();
    let mut abelian = true;
    for x in ng.arrows() {
        for y in ng.arrows() {
            if ng.src(x) == ng.src(y) && ng.compose(x, y) != ng.compose(y, x) {
                abelian = false;
            }
        }
    }
    if involutive != abelian {
        return Err(Violation::new("symmetric-iff-abelian", "criteria disagree"));
    }
    Ok(involutive)
}

/// The kernels of the two actions and their intersection Γ, which is an
/// abelian normal subgroup bundle (both facts re-verified).
pub struct GammaBundles {
    pub gamma_l: BTreeSet<Arrow>,
    pub gamma_r: BTreeSet<Arrow>,
    pub gamma: BTreeSet<Arrow>,
}

pub fn gamma_bundles(b: &BraidedGroupoid) -> Check<GammaBundles> {
    let g = b.groupoid();
    let loops: Vec<Arrow> = g.arrows().filter(|&v| g.src(v) == g.end(v)).collect();
    let gamma_l: BTreeSet<Arrow> = loops
        .iter()
        .copied()
        .filter(|&v| g.arrows().filter(|&w| g.src(w) == g.end(v)).all(|w| b.lact(v, w) == w))
        .collect();
    let gamma_r: BTreeSet<Arrow> = loops
        .iter()
        .copied()
        .filter(|&v| g.arrows().filter(|&z| g.end(z) == g.src(v)).all(|z| b.ract(z, v) == z))
        .collect();
    let gamma: BTreeSet<Arrow> = gamma_l.intersection(&gamma_r).copied().collect();
    // Γ_l: m↼y = y⁻¹my, and Γ_r: x⇀n = xnx⁻¹
    for &m in &gamma_l {
        for y in g.arrows() {
            if g.src(y) == g.src(m) {
                let conj = g.compose(g.compose(g.inverse(y), m), y);
                if b.ract(m, y) != conj {
                    return Err(Violation::new("gamma-left", format!("({},{})", g.id(m), g.id(y))));
                }
            }
        }
    }
    for &n in &gamma_r {
        for x in g.arrows() {
            if g.end(x) == g.src(n) {
                let conj = g.compose(g.compose(x, n), g.inverse(x));
                if b.lact(x, n) != conj {
                    return Err(Violation::new("gamma-right", format!("({},{})", g.id(x), g.id(n))));
                }
            }
        }
    }
    if !is_normal_bundle(g, &gamma)? {
        return Err(Violation::new("gamma-normal", "gamma is not a normal bundle"));
    }
    for &x in &gamma {
        for &y in &gamma {
            if g.src(x) == g.src(y) && g.compose(x, y) != g.compose(y, x) {
                return Err(Violation::new("gamma-abelian", format!("({},{})", g.id(x), g.id(y))));
            }
        }
    }
    Ok(GammaBundles { gamma_l, gamma_r, gamma })
}

/// Quotient braided structure G/Λ for a normal subgroup bundle Λ ⊆ Γ.
pub fn quotient_braided(
    b: &BraidedGroupoid,
    lambda: &BTreeSet<Arrow>,
) -> Check<(BraidedGroupoid, GroupoidMorphism)> {
    let g = b.groupoid();
    let gamma = gamma_bundles(b)?.gamma;
    if !lambda.is_subset(&gamma) {
        return Err(Violation::new("lambda-in-gamma", "bundle acts nontrivially"));
    }
    let (q, proj) = crate::groupoid::quotient_by_bundle(g, lambda)?;
    // section: least preimage per class
    let mut rep = vec![usize::MAX; q.arrow_count()];
    for f in g.arrows() {
        let c = proj.apply(f);
        if rep[c] == usize::MAX {
            rep[c] = f;
        }
    }
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (x, y) in q.composable_pairs() {
        lact.insert((x, y), proj.apply(b.lact(rep[x], rep[y])));
        ract.insert((x, y), proj.apply(b.ract(rep[x], rep[y])));
    }
    Ok((check_braided_groupoid(&q, &lact, &ract)?, proj))
}

/// The braided structure on the restricted product V⊠H of a matched pair:
/// pairs with equal endpoints under componentwise multiplication, braided
/// by σ((g,x),(h,y)) = ((x⇀h, xy(x↼h)⁻¹), ((x⇀h)⁻¹gh, x↼h)). The same
/// structure is rebuilt through its cocycle datum and both must agree.
pub struct RestrictedProduct {
    pub braided: BraidedGroupoid,
    pub pairs: Vec<(Arrow, Arrow)>,
}

pub fn restricted_product_braided(mp: &MatchedPair) -> Check<RestrictedProduct> {
    let (v, h) = (&mp.v, &mp.h);
    let mut pairs = Vec::new();
    for g in v.arrows() {
        for x in h.arrows() {
            if v.src(g) == h.src(x) && v.end(g) == h.end(x) {
                pairs.push((g, x));
            }
        }
    }
    let index: HashMap<(Arrow, Arrow), Arrow> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let arrows: Vec<(String, Vertex, Vertex)> = pairs
        .iter()
        .map(|&(g, x)| (format!("({},{})", v.id(g), h.id(x)), v.src(g), v.end(g)))
        .collect();
    let q = FiniteQuiver::new(v.base().clone(), arrows)?;
    let identity: Vec<Arrow> =
        v.base().iter().map(|p| index[&(v.identity_at(p), h.identity_at(p))]).collect();
    let mut compose = HashMap::new();
    for (i, &(g, x)) in pairs.iter().enumerate() {
        for (j, &(g2, x2)) in pairs.iter().enumerate() {
            if v.end(g) == v.src(g2) {
                compose.insert((i, j), index[&(v.compose(g, g2), h.compose(x, x2))]);
            }
        }
    }
    let inverse: Vec<Arrow> =
        pairs.iter().map(|&(g, x)| index[&(v.inverse(g), h.inverse(x))]).collect();
    let gpd = FiniteGroupoid::new(q, identity, compose, inverse)?;
    gpd.validate()?;

    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (i, &(g, x)) in pairs.iter().enumerate() {
        for (j, &(g2, _x2)) in pairs.iter().enumerate() {
            if v.end(g) != v.src(g2) {
                continue;
            }
            let (_, x2) = pairs[j];
            let xh = mp.lact(x, g2);
            let xr = mp.ract(x, g2);
            let top = index[&(xh, h.compose(h.compose(x, x2), h.inverse(xr)))];
            let bot = index[&(v.product(v.end(xh), &[v.inverse(xh), g, g2]), xr)];
            lact.insert((i, j), top);
            ract.insert((i, j), bot);
        }
    }
    let direct = check_braided_groupoid(&gpd, &lact, &ract)?;

    // the same braiding through the cocycle datum: N = loops of V⋈H,
    // π(g,x) = g⁻¹x, d↼(g,x) = g⁻¹dg
    let diag = diagonal_groupoid(mp)?;
    let d = &diag.groupoid;
    let loops: BTreeSet<Arrow> = d.arrows().filter(|&a| d.src(a) == d.end(a)).collect();
    let embed: Vec<Arrow> = loops.iter().copied().collect();
    let local: HashMap<Arrow, Arrow> = embed.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let n = GroupBundle::new(d.restrict(&loops)?)?;
    let pi: Vec<Arrow> =
        pairs.iter().map(|&(g, x)| local[&diag.pair_index(v.inverse(g), x)]).collect();
    let mut table = HashMap::new();
    for (m, &da) in embed.iter().enumerate() {
        for (i, &(g, _)) in pairs.iter().enumerate() {
            if n.groupoid().src(m) == gpd.src(i) {
                let gv = diag.embed_v[g];
                let conj = d.compose(d.compose(d.inverse(gv), da), gv);
                table.insert((m, i), local[&conj]);
            }
        }
    }
    let datum = check_cocycle_datum(&gpd, &n, &pi, &BundleRightAction { table })?;
    let via_datum = from_cocycle_datum(&datum)?;
    if via_datum.lact_table() != direct.lact_table()
        || via_datum.ract_table() != direct.ract_table()
    {
        return Err(Violation::new("restricted-product", "datum route disagrees"));
    }
    Ok(RestrictedProduct { braided: direct, pairs })
}

/// A structural pair: a braided groupoid G together with a quiver A (the
/// first half of its double D) graded over G, carrying left actions ⇀ and
/// ⇁ and a right action ↼ of G on D, such that the grading generates G
/// and the diagonal action on D⊗D is faithful.
#[derive(Debug, Clone)]
pub struct StructuralPair {
    pub braided: BraidedGroupoid,
    pub quiver: FiniteQuiver,
    /// double(quiver); arrow i < n is arrow i of `quiver`
    pub dquiver: FiniteQuiver,
    /// D-arrow → G-arrow
    pub grading: Vec<Arrow>,
    /// (G-arrow g, D-arrow x) → g⇀x, for e(g) = s(x)
    pub glact: HashMap<(Arrow, Arrow), Arrow>,
    /// (D-arrow x, G-arrow g) → x↼g, for e(x) = s(g)
    pub gract: HashMap<(Arrow, Arrow), Arrow>,
    /// (G-arrow g, D-arrow x) → g⇁x
    pub gdlact: HashMap<(Arrow, Arrow), Arrow>,
    /// whether the grading is injective on the first half
    pub faithful: bool,
}

fn check_d_left_action(
    g: &FiniteGroupoid,
    d: &FiniteQuiver,
    act: &HashMap<(Arrow, Arrow), Arrow>,
    name: &str,
) -> Check<()> {
    for f in g.arrows() {
        for x in d.arrows() {
            let defined = act.contains_key(&(f, x));
            if defined != (g.end(f) == d.src(x)) {
                return Err(Violation::new(
                    format!("{name}-domain"),
                    format!("({},{})", g.id(f), d.id(x)),
                ));
            }
            if let Some(&fx) = act.get(&(f, x)) {
                if d.src(fx) != g.src(f) {
                    return Err(Violation::new(
                        format!("{name}-fiber"),
                        format!("({},{})", g.id(f), d.id(x)),
                    ));
                }
            }
        }
    }
    for x in d.arrows() {
        if act[&(g.identity_at(d.src(x)), x)] != x {
            return Err(Violation::new(format!("{name}-unit"), d.id(x).to_string()));
        }
    }
    for (f, h) in g.composable_pairs() {
        for x in d.arrows() {
            if g.end(h) == d.src(x) && act[&(g.compose(f, h), x)] != act[&(f, act[&(h, x)])] {
                return Err(Violation::new(
                    format!("{name}-associative"),
                    format!("({},{},{})", g.id(f), g.id(h), d.id(x)),
                ));
            }
        }
    }
    Ok(())
}

pub fn check_structural_pair(sp: &StructuralPair) -> Check<()> {
    let g = sp.braided.groupoid();
    let d = &sp.dquiver;
    check_d_left_action(g, d, &sp.glact, "pair-lact")?;
    check_d_left_action(g, d, &sp.gdlact, "pair-dlact")?;
    for x in d.arrows() {
        for f in g.arrows() {
            let defined = sp.gract.contains_key(&(x, f));
            if defined != (d.end(x) == g.src(f)) {
                return Err(Violation::new(
                    "pair-ract-domain",
                    format!("({},{})", d.id(x), g.id(f)),
                ));
            }
            if let Some(&xf) = sp.gract.get(&(x, f)) {
                if d.end(xf) != g.end(f) {
                    return Err(Violation::new(
                        "pair-ract-fiber",
                        format!("({},{})", d.id(x), g.id(f)),
                    ));
                }
            }
        }
    }
    for x in d.arrows() {
        if sp.gract[&(x, g.identity_at(d.end(x)))] != x {
            return Err(Violation::new("pair-ract-unit", d.id(x).to_string()));
        }
    }
    for (f, h) in g.composable_pairs() {
        for x in d.arrows() {
            if d.end(x) == g.src(f)
                && sp.gract[&(sp.gract[&(x, f)], h)] != sp.gract[&(x, g.compose(f, h))]
            {
                return Err(Violation::new(
                    "pair-ract-associative",
                    format!("({},{},{})", d.id(x), g.id(f), g.id(h)),
                ));
            }
        }
    }
    // h⇀(f⇁x) = (h⇀f)⇁((h↼f)⇀x)
    for (hh, f) in g.composable_pairs() {
        for x in d.arrows() {
            if g.end(f) != d.src(x) {
                continue;
            }
            let lhs = sp.glact[&(hh, sp.gdlact[&(f, x)])];
            let rhs = sp.gdlact[&(
                sp.braided.lact(hh, f),
                sp.glact[&(sp.braided.ract(hh, f), x)],
            )];
            if lhs != rhs {
                return Err(Violation::new(
                    "pair-compatibility",
                    format!("({},{},{})", g.id(hh), g.id(f), d.id(x)),
                ));
            }
        }
    }
    // the grading is a quiver morphism intertwining all three actions
    if sp.grading.len() != d.arrow_count() {
        return Err(Violation::new("pair-grading-total", "length mismatch"));
    }
    let n = sp.quiver.arrow_count();
    for x in d.arrows() {
        let gx = sp.grading[x];
        if g.src(gx) != d.src(x) || g.end(gx) != d.end(x) {
            return Err(Violation::new("pair-grading-morphism", d.id(x).to_string()));
        }
        let xinv = if x < n { x + n } else { x - n };
        if sp.grading[xinv] != g.inverse(gx) {
            return Err(Violation::new("pair-grading-involution", d.id(x).to_string()));
        }
    }
    for f in g.arrows() {
        for x in d.arrows() {
            if g.end(f) == d.src(x) {
                if sp.grading[sp.glact[&(f, x)]] != sp.braided.lact(f, sp.grading[x]) {
                    return Err(Violation::new(
                        "pair-grading-lact",
                        format!("({},{})", g.id(f), d.id(x)),
                    ));
                }
                if sp.grading[sp.gdlact[&(f, x)]] != sp.braided.dn_lact(f, sp.grading[x]) {
                    return Err(Violation::new(
                        "pair-grading-dlact",
                        format!("({},{})", g.id(f), d.id(x)),
                    ));
                }
            }
            if d.end(x) == g.src(f)
                && sp.grading[sp.gract[&(x, f)]] != sp.braided.ract(sp.grading[x], f)
            {
                return Err(Violation::new(
                    "pair-grading-ract",
                    format!("({},{})", d.id(x), g.id(f)),
                ));
            }
        }
    }
    // the grading image generates G
    let gens: BTreeSet<Arrow> = sp.grading.iter().copied().collect();
    let generated = crate::word::subgroupoid_generated(g, &gens);
    if generated.len() != g.arrow_count() {
        return Err(Violation::new("pair-generates", "grading image does not generate"));
    }
    // the diagonal action g ↦ (x,y) ↦ (g⇀x, (g↼|x|)⇁y) is faithful
    let mut signatures: Vec<Vec<(Arrow, Arrow)>> = Vec::new();
    for f in g.arrows() {
        let mut sig = Vec::new();
        for x in d.arrows() {
            for y in d.arrows() {
                if d.end(x) != d.src(y) || g.end(f) != d.src(x) {
                    continue;
                }
                let u = sp.glact[&(f, x)];
                let v = sp.gdlact[&(sp.braided.ract(f, sp.grading[x]), y)];
                sig.push((u, v));
            }
        }
        signatures.push(sig);
    }
    for f in g.arrows() {
        for h in g.arrows() {
            if f < h
                && g.src(f) == g.src(h)
                && g.end(f) == g.end(h)
                && signatures[f] == signatures[h]
            {
                return Err(Violation::new(
                    "pair-faithful",
                    format!("({},{})", g.id(f), g.id(h)),
                ));
            }
        }
    }
    Ok(())
}

/// An element of the reduced structure groupoid: the pair of translation
/// families it induces on the arrows of D, keyed by fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Elem {
    src: Vertex,
    end: Vertex,
    /// x with s(x) = end ↦ u⇀x
    l: BTreeMap<Arrow, Arrow>,
    /// z with e(z) = src ↦ z↼u
    r: BTreeMap<Arrow, Arrow>,
}

impl Elem {
    fn identity(d: &FiniteQuiver, p: Vertex) -> Elem {
        let l = d.arrows().filter(|&x| d.src(x) == p).map(|x| (x, x)).collect();
        let r = d.arrows().filter(|&z| d.end(z) == p).map(|z| (z, z)).collect();
        Elem { src: p, end: p, l, r }
    }

    fn generator(dbl: &NonDegenerateSolution, m: Arrow) -> Elem {
        let d = dbl.quiver();
        let l = d
            .arrows()
            .filter(|&x| d.src(x) == d.end(m))
            .map(|x| (x, dbl.lact(m, x)))
            .collect();
        let r = d
            .arrows()
            .filter(|&z| d.end(z) == d.src(m))
            .map(|z| (z, dbl.ract(z, m)))
            .collect();
        Elem { src: d.src(m), end: d.end(m), l, r }
    }

    fn compose(&self, other: &Elem) -> Elem {
        debug_assert_eq!(self.end, other.src);
        let l = other.l.iter().map(|(&x, &ox)| (x, self.l[&ox])).collect();
        let r = self.r.iter().map(|(&z, &sz)| (z, other.r[&sz])).collect();
        Elem { src: self.src, end: other.end, l, r }
    }

    fn inverse(&self) -> Elem {
        let l = self.l.iter().map(|(&x, &ux)| (ux, x)).collect();
        let r = self.r.iter().map(|(&z, &zu)| (zu, z)).collect();
        Elem { src: self.end, end: self.src, l, r }
    }
}

fn render_word(d: &FiniteQuiver, w: &PathValue) -> String {
    if w.arrows.is_empty() {
        format!("id:{}", d.base().name(w.src))
    } else {
        w.arrows.iter().map(|&a| d.id(a).to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// The reduced structure groupoid of a non-degenerate solution: the
/// groupoid of joint translation families generated by the arrows of the
/// double D of the solution's quiver, braided by the word-level braiding,
/// acting back on D so that the original solution can be rebuilt.
pub fn reduced_structure_groupoid(s: &NonDegenerateSolution) -> Check<StructuralPair> {
    let dbl = double_solution(s)?;
    let d = dbl.quiver().clone();
    // closure by breadth-first saturation; the first word reaching an
    // element is its shortest, lexicographically least representative
    let mut reps: HashMap<Elem, PathValue> = HashMap::new();
    let mut queue: Vec<Elem> = Vec::new();
    for p in d.base().iter() {
        let e = Elem::identity(&d, p);
        reps.insert(e.clone(), PathValue::identity(p));
        queue.push(e);
    }
    let gens: Vec<Elem> = d.arrows().map(|m| Elem::generator(&dbl, m)).collect();
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        let word = reps[&cur].clone();
        for (m, gen) in gens.iter().enumerate() {
            if cur.end != gen.src {
                continue;
            }
            let next = cur.compose(gen);
            if !reps.contains_key(&next) {
                let mut arrows = word.arrows.clone();
                arrows.push(m);
                reps.insert(next.clone(), PathValue { src: word.src, arrows });
                queue.push(next);
            }
        }
    }
    // canonical numbering by fingerprint
    let mut elems: Vec<Elem> = reps.keys().cloned().collect();
    elems.sort();
    let index: HashMap<&Elem, Arrow> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let words: Vec<PathValue> = elems.iter().map(|e| reps[e].clone()).collect();
    let elem_of_word = |w: &PathValue| -> Arrow {
        let mut acc = Elem::identity(&d, w.src);
        for &m in &w.arrows {
            acc = acc.compose(&gens[m]);
        }
        index[&acc]
    };

    let arrows: Vec<(String, Vertex, Vertex)> =
        elems.iter().map(|e| (render_word(&d, &reps[e]), e.src, e.end)).collect();
    let quiver = FiniteQuiver::new(d.base().clone(), arrows)?;
    let identity: Vec<Arrow> =
        d.base().iter().map(|p| index[&Elem::identity(&d, p)]).collect();
    let mut compose = HashMap::new();
    for (i, e1) in elems.iter().enumerate() {
        for (j, e2) in elems.iter().enumerate() {
            if e1.end == e2.src {
                compose.insert((i, j), index[&e1.compose(e2)]);
            }
        }
    }
    let inverse: Vec<Arrow> = elems.iter().map(|e| index[&e.inverse()]).collect();
    let g = FiniteGroupoid::new(quiver, identity, compose, inverse)?;
    g.validate()?;

    // braiding of elements through the path-level braiding of words
    let mut lact = HashMap::new();
    let mut ract = HashMap::new();
    for (i, e1) in elems.iter().enumerate() {
        for (j, e2) in elems.iter().enumerate() {
            if e1.end != e2.src {
                continue;
            }
            let (u, v) = path_sigma(&dbl, &words[i], &words[j])?;
            lact.insert((i, j), elem_of_word(&u));
            ract.insert((i, j), elem_of_word(&v));
        }
    }
    let braided = check_braided_groupoid(&g, &lact, &ract)?;

    // grading and the three actions of G on D
    let grading: Vec<Arrow> =
        d.arrows().map(|m| index[&gens[m]]).collect();
    let word_lact = |w: &PathValue, x: Arrow| -> Arrow {
        w.arrows.iter().rev().fold(x, |acc, &m| dbl.lact(m, acc))
    };
    let word_dn_lact = |w: &PathValue, x: Arrow| -> Arrow {
        w.arrows.iter().rev().fold(x, |acc, &m| dbl.dn_lact(m, acc))
    };
    let word_ract = |x: Arrow, w: &PathValue| -> Arrow {
        w.arrows.iter().fold(x, |acc, &m| dbl.ract(acc, m))
    };
    let mut glact = HashMap::new();
    let mut gract = HashMap::new();
    let mut gdlact = HashMap::new();
    for (i, e) in elems.iter().enumerate() {
        for x in d.arrows() {
            if e.end == d.src(x) {
                glact.insert((i, x), word_lact(&words[i], x));
                gdlact.insert((i, x), word_dn_lact(&words[i], x));
            }
            if d.end(x) == e.src {
                gract.insert((x, i), word_ract(x, &words[i]));
            }
        }
    }
    let n = s.quiver().arrow_count();
    let faithful =
        grading[..n].iter().collect::<BTreeSet<_>>().len() == n;
    let sp = StructuralPair {
        braided,
        quiver: s.quiver().clone(),
        dquiver: d,
        grading,
        glact,
        gract,
        gdlact,
        faithful,
    };
    check_structural_pair(&sp)?;
    Ok(sp)
}

/// Rebuild the solution from a structural pair:
/// σ(a,b) = (‖a‖⇀b, (‖b‖⁻¹⇃‖a‖⁻¹)⇁a).
pub fn solution_from_structural_pair(sp: &StructuralPair) -> Check<NonDegenerateSolution> {
    let a = &sp.quiver;
    let g = sp.braided.groupoid();
    let n = a.arrow_count();
    let mut table = BTreeMap::new();
    for x in a.arrows() {
        for y in a.arrows() {
            if a.end(x) != a.src(y) {
                continue;
            }
            let u = sp.glact[&(sp.grading[x], y)];
            let h = sp.braided.dn_ract(g.inverse(sp.grading[y]), g.inverse(sp.grading[x]));
            let v = sp.gdlact[&(h, x)];
            if u >= n || v >= n {
                return Err(Violation::new(
                    "reconstruction-positive",
                    format!("({},{})", a.id(x), a.id(y)),
                ));
            }
            table.insert((x, y), (u, v));
        }
    }
    let sol = check_solution(a, &table)?;
    check_nondegenerate(&sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matched::trivial_matched_pair;
    use crate::quiver;
    use crate::solution::flip_solution;

    #[test]
    fn flip_braided_on_cyclic_groups() {
        for g in [fixtures::z2(), fixtures::z3(), fixtures::z4()] {
            let b = flip_braided(&g).unwrap();
            assert!(b.solution().is_involutive());
            assert!(is_symmetric(&b).unwrap());
        }
    }

    #[test]
    fn flip_fails_on_s3() {
        assert!(flip_braided(&fixtures::s3()).is_err());
    }

    #[test]
    fn conjugation_braided_on_s3() {
        let b = conjugation_braided(&fixtures::s3()).unwrap();
        assert!(!b.solution().is_involutive());
        assert!(!is_symmetric(&b).unwrap());
        // antipode braiding undoes it: applying it twice gives the original
        let anti = antipode_braided(&b).unwrap();
        let back = antipode_braided(&anti).unwrap();
        assert_eq!(back.lact_table(), b.lact_table());
        assert_eq!(back.ract_table(), b.ract_table());
    }

    #[test]
    fn cocycle_datum_roundtrip() {
        for b in [
            flip_braided(&fixtures::z4()).unwrap(),
            conjugation_braided(&fixtures::s3()).unwrap(),
        ] {
            let datum = to_cocycle_datum(&b).unwrap();
            let back = from_cocycle_datum(&datum).unwrap();
            assert_eq!(back.lact_table(), b.lact_table());
            assert_eq!(back.ract_table(), b.ract_table());
        }
    }

    #[test]
    fn datum_to_braided_to_datum() {
        let b = conjugation_braided(&fixtures::s3()).unwrap();
        let datum = to_cocycle_datum(&b).unwrap();
        let again = to_cocycle_datum(&from_cocycle_datum(&datum).unwrap()).unwrap();
        assert_eq!(datum.pi, again.pi);
        assert_eq!(datum.act.table, again.act.table);
    }

    #[test]
    fn gamma_of_conjugation_is_center() {
        let b = conjugation_braided(&fixtures::s3()).unwrap();
        let gb = gamma_bundles(&b).unwrap();
        assert_eq!(gb.gamma_r.len(), 6);
        assert_eq!(gb.gamma.len(), 1);
        assert!(b.groupoid().is_identity(*gb.gamma.iter().next().unwrap()));
    }

    #[test]
    fn quotient_flip_z4_by_z2() {
        let b = flip_braided(&fixtures::z4()).unwrap();
        let lambda: BTreeSet<Arrow> = [0, 2].into_iter().collect();
        let (q, _) = quotient_braided(&b, &lambda).unwrap();
        assert_eq!(q.groupoid().arrow_count(), 2);
        let z2 = flip_braided(&fixtures::z2()).unwrap();
        assert_eq!(q.lact_table(), z2.lact_table());
    }

    #[test]
    fn restricted_product_of_trivial_pair_is_flip() {
        let mp = trivial_matched_pair(&fixtures::z2(), &fixtures::z2()).unwrap();
        let rp = restricted_product_braided(&mp).unwrap();
        assert_eq!(rp.braided.groupoid().arrow_count(), 4);
        assert!(rp.braided.solution().is_involutive());
        for (&(i, j), &v) in rp.braided.lact_table() {
            let _ = i;
            assert_eq!(v, j);
        }
    }

    #[test]
    fn reduced_structure_groupoid_of_flip_is_trivial() {
        let q = fixtures::l2();
        let s = check_nondegenerate(&flip_solution(&q).unwrap()).unwrap();
        let sp = reduced_structure_groupoid(&s).unwrap();
        assert_eq!(sp.braided.groupoid().arrow_count(), 1);
        let back = solution_from_structural_pair(&sp).unwrap();
        assert_eq!(back.sigma_perm(), s.sigma_perm());
    }

    #[test]
    fn reduced_structure_groupoid_roundtrip_bundle() {
        let q = fixtures::loop_bundle(&[2, 2]);
        let s = check_nondegenerate(&flip_solution(&q).unwrap()).unwrap();
        let sp = reduced_structure_groupoid(&s).unwrap();
        let back = solution_from_structural_pair(&sp).unwrap();
        assert_eq!(back.sigma_perm(), s.sigma_perm());
    }

    #[test]
    fn degenerate_structural_pair_rejected() {
        // Z2 acting trivially on the double of L2: the grading image does
        // not generate and the diagonal action is not faithful
        let g = fixtures::z2();
        let b = flip_braided(&g).unwrap();
        let a = fixtures::l2();
        let d = quiver::double(&a);
        let grading: Vec<Arrow> = d.arrows().map(|_| 0).collect();
        let mut triv = HashMap::new();
        let mut trivr = HashMap::new();
        for f in g.arrows() {
            for x in d.arrows() {
                triv.insert((f, x), x);
                trivr.insert((x, f), x);
            }
        }
        let sp = StructuralPair {
            braided: b,
            quiver: a,
            dquiver: d,
            grading,
            glact: triv.clone(),
            gract: trivr,
            gdlact: triv,
            faithful: false,
        };
        let err = check_structural_pair(&sp).unwrap_err();
        assert!(err.rule == "pair-generates" || err.rule == "pair-faithful");
    }
}
