//! Self-describing JSON documents for every structure the command-line
//! tool consumes or emits. One format, a "kind" discriminator, exact
//! rationals as "n/d" strings, and loss-free round-trips.

use crate::groupoid::FiniteGroupoid;
use crate::linear::{BimoduleMatrix, FaceModel, Scalar};
use crate::quiver::{Arrow, FiniteQuiver, VertexSet};
use crate::rack::RackBundle;
use crate::solution::{check_nondegenerate, check_solution, NonDegenerateSolution};
use crate::{Check, Violation};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Quiver(QuiverDoc),
    Groupoid(GroupoidDoc),
    Solution(SolutionDoc),
    MatchedPair(MatchedPairDoc),
    RackBundle(RackBundleDoc),
    FaceModel(FaceModelDoc),
    BraidedGroupoid(BraidedGroupoidDoc),
    Matrix(MatrixDoc),
    StructuralPair(StructuralPairDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub vertices: Vec<String>,
    /// [id, source vertex, end vertex]
    pub arrows: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub quiver: QuiverDoc,
    /// [f, g, f·g] by arrow id, one triple per composable pair
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub quiver: QuiverDoc,
    /// [x, y, x⇀y, x↼y] by arrow id
    pub sigma: Vec<[String; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPairDoc {
    pub v: GroupoidDoc,
    pub h: GroupoidDoc,
    /// [x, g, x⇀g]
    pub lact: Vec<[String; 3]>,
    /// [x, g, x↼g]
    pub ract: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RackBundleDoc {
    pub vertices: Vec<String>,
    /// [element id, fiber vertex]
    pub elements: Vec<[String; 2]>,
    /// [x, y, x▷y]
    pub triangle: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceModelDoc {
    pub horizontal: QuiverDoc,
    pub vertical: QuiverDoc,
    /// [top, left, right, bottom, weight "n/d"]
    pub boxes: Vec<[String; 5]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BraidedGroupoidDoc {
    pub groupoid: GroupoidDoc,
    /// [f, g, f⇀g]
    pub lact: Vec<[String; 3]>,
    /// [f, g, f↼g]
    pub ract: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub vertices: Vec<String>,
    /// [row label, row degree (P,Q) as "P,Q", column label, column degree, value "n/d"]
    pub entries: Vec<[String; 5]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralPairDoc {
    pub solution: SolutionDoc,
    pub groupoid: GroupoidDoc,
    /// [arrow id, grading arrow id]
    pub grading: Vec<[String; 2]>,
    pub faithful: bool,
}

pub fn wrap(body: Body) -> Document {
    Document { version: FORMAT_VERSION, body }
}

pub fn to_json(d: &Document) -> String {
    let mut out = serde_json::to_string_pretty(d).expect("document serialization");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Check<Document> {
    let d: Document =
        serde_json::from_str(text).map_err(|e| Violation::new("parse", e.to_string()))?;
    if d.version != FORMAT_VERSION {
        return Err(Violation::new("version", format!("unrecognized version {}", d.version)));
    }
    Ok(d)
}

// conversions out of core types

pub fn quiver_doc(q: &FiniteQuiver) -> QuiverDoc {
    QuiverDoc {
        vertices: q.base().names().to_vec(),
        arrows: q
            .arrows()
            .map(|x| {
                [
                    q.id(x).to_string(),
                    q.base().name(q.src(x)).to_string(),
                    q.base().name(q.end(x)).to_string(),
                ]
            })
            .collect(),
    }
}

pub fn groupoid_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let q = g.quiver();
    let mut compose = Vec::new();
    for (f, h) in g.composable_pairs() {
        compose.push([
            q.id(f).to_string(),
            q.id(h).to_string(),
            q.id(g.compose(f, h)).to_string(),
        ]);
    }
    GroupoidDoc { quiver: quiver_doc(q), compose }
}

pub fn solution_doc(s: &NonDegenerateSolution) -> SolutionDoc {
    let q = s.quiver();
    SolutionDoc {
        quiver: quiver_doc(q),
        sigma: s
            .pairs()
            .iter()
            .map(|&(x, y)| {
                let (u, w) = s.apply(x, y);
                [
                    q.id(x).to_string(),
                    q.id(y).to_string(),
                    q.id(u).to_string(),
                    q.id(w).to_string(),
                ]
            })
            .collect(),
    }
}

pub fn matched_pair_doc(mp: &crate::matched::MatchedPair) -> MatchedPairDoc {
    let (vq, hq) = (mp.v.quiver(), mp.h.quiver());
    let mut lact = Vec::new();
    let mut ract = Vec::new();
    for (x, g) in mp.domain() {
        let key = |v: Arrow, q: &FiniteQuiver| q.id(v).to_string();
        lact.push([key(x, hq), key(g, vq), key(mp.lact(x, g), vq)]);
        ract.push([key(x, hq), key(g, vq), key(mp.ract(x, g), hq)]);
    }
    MatchedPairDoc { v: groupoid_doc(&mp.v), h: groupoid_doc(&mp.h), lact, ract }
}

pub fn rack_doc(l: &RackBundle) -> RackBundleDoc {
    let mut triangle = Vec::new();
    for (&(x, y), &v) in &l.op {
        triangle.push([l.ids[x].clone(), l.ids[y].clone(), l.ids[v].clone()]);
    }
    triangle.sort();
    RackBundleDoc {
        vertices: l.base.names().to_vec(),
        elements: (0..l.len())
            .map(|x| [l.ids[x].clone(), l.base.name(l.fiber_of[x]).to_string()])
            .collect(),
        triangle,
    }
}

pub fn scalar_string(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

pub fn parse_scalar(text: &str) -> Check<Scalar> {
    let scalar = if let Some((n, d)) = text.split_once('/') {
        let n = num_bigint::BigInt::from_str(n.trim())
            .map_err(|e| Violation::new("parse", format!("numerator: {e}")))?;
        let d = num_bigint::BigInt::from_str(d.trim())
            .map_err(|e| Violation::new("parse", format!("denominator: {e}")))?;
        if d.is_zero() {
            return Err(Violation::new("parse", "zero denominator"));
        }
        Scalar::new(n, d)
    } else {
        let n = num_bigint::BigInt::from_str(text.trim())
            .map_err(|e| Violation::new("parse", format!("scalar: {e}")))?;
        Scalar::from_integer(n)
    };
    Ok(scalar)
}

pub fn face_model_doc(fm: &FaceModel) -> FaceModelDoc {
    FaceModelDoc {
        horizontal: quiver_doc(&fm.h),
        vertical: quiver_doc(&fm.v),
        boxes: fm
            .boxes
            .iter()
            .map(|b| {
                [
                    fm.h.id(b.top).to_string(),
                    fm.v.id(b.left).to_string(),
                    fm.v.id(b.right).to_string(),
                    fm.h.id(b.bottom).to_string(),
                    scalar_string(&b.weight),
                ]
            })
            .collect(),
    }
}

pub fn braided_doc(b: &crate::braided::BraidedGroupoid) -> BraidedGroupoidDoc {
    let g = b.groupoid();
    let q = g.quiver();
    let mut lact = Vec::new();
    let mut ract = Vec::new();
    for (&(f, h), &v) in b.lact_table() {
        lact.push([q.id(f).to_string(), q.id(h).to_string(), q.id(v).to_string()]);
    }
    for (&(f, h), &v) in b.ract_table() {
        ract.push([q.id(f).to_string(), q.id(h).to_string(), q.id(v).to_string()]);
    }
    lact.sort();
    ract.sort();
    BraidedGroupoidDoc { groupoid: groupoid_doc(g), lact, ract }
}

pub fn matrix_doc(m: &BimoduleMatrix) -> MatrixDoc {
    let deg = |s: &crate::linear::GradedSpace, i: usize| {
        let (p, q) = s.degree[i];
        format!("{},{}", s.base.name(p), s.base.name(q))
    };
    let mut entries: Vec<[String; 5]> = m
        .entries()
        .iter()
        .map(|(&(r, c), v)| {
            [
                m.cod.labels[r].clone(),
                deg(&m.cod, r),
                m.dom.labels[c].clone(),
                deg(&m.dom, c),
                scalar_string(v),
            ]
        })
        .collect();
    entries.sort();
    MatrixDoc { vertices: m.dom.base.names().to_vec(), entries }
}

pub fn structural_pair_doc(
    sp: &crate::braided::StructuralPair,
    s: &NonDegenerateSolution,
) -> StructuralPairDoc {
    let gq = sp.braided.groupoid().quiver();
    StructuralPairDoc {
        solution: solution_doc(s),
        groupoid: groupoid_doc(sp.braided.groupoid()),
        grading: sp
            .quiver
            .arrows()
            .map(|x| [sp.quiver.id(x).to_string(), gq.id(sp.grading[x]).to_string()])
            .collect(),
        faithful: sp.faithful,
    }
}

// conversions back into core types

pub fn quiver_from_doc(d: &QuiverDoc) -> Check<FiniteQuiver> {
    let base = VertexSet::new(d.vertices.clone())?;
    let mut arrows = Vec::new();
    for [id, s, e] in &d.arrows {
        let s = base
            .index_of(s)
            .ok_or_else(|| Violation::new("unknown-vertex", s.clone()))?;
        let e = base
            .index_of(e)
            .ok_or_else(|| Violation::new("unknown-vertex", e.clone()))?;
        arrows.push((id.clone(), s, e));
    }
    FiniteQuiver::new(base, arrows)
}

fn arrow_of(q: &FiniteQuiver, id: &str) -> Check<usize> {
    q.arrow_by_id(id).ok_or_else(|| Violation::new("unknown-arrow", id.to_string()))
}

pub fn groupoid_from_doc(d: &GroupoidDoc) -> Check<FiniteGroupoid> {
    let q = quiver_from_doc(&d.quiver)?;
    let mut compose = HashMap::new();
    for [f, h, v] in &d.compose {
        compose.insert((arrow_of(&q, f)?, arrow_of(&q, h)?), arrow_of(&q, v)?);
    }
    // derive the identities and inverses from the composition table
    let mut identity = Vec::new();
    for v in q.base().iter() {
        let from_v: Vec<usize> = q.arrows().filter(|&f| q.src(f) == v).collect();
        let e = q
            .arrows()
            .find(|&e| {
                q.src(e) == v
                    && q.end(e) == v
                    && from_v.iter().all(|&f| compose.get(&(e, f)) == Some(&f))
            })
            .ok_or_else(|| {
                Violation::new("groupoid-identity", q.base().name(v).to_string())
            })?;
        identity.push(e);
    }
    let mut inverse = Vec::new();
    for f in q.arrows() {
        let inv = q
            .arrows()
            .find(|&g| compose.get(&(f, g)) == Some(&identity[q.src(f)]))
            .ok_or_else(|| Violation::new("groupoid-inverse", q.id(f).to_string()))?;
        inverse.push(inv);
    }
    FiniteGroupoid::new(q, identity, compose, inverse)
}

pub fn solution_from_doc(d: &SolutionDoc) -> Check<NonDegenerateSolution> {
    let q = quiver_from_doc(&d.quiver)?;
    let mut table = BTreeMap::new();
    for [x, y, u, w] in &d.sigma {
        table.insert(
            (arrow_of(&q, x)?, arrow_of(&q, y)?),
            (arrow_of(&q, u)?, arrow_of(&q, w)?),
        );
    }
    let s = check_solution(&q, &table)?;
    check_nondegenerate(&s)
}

pub fn rack_from_doc(d: &RackBundleDoc) -> Check<RackBundle> {
    let base = VertexSet::new(d.vertices.clone())?;
    let mut ids = Vec::new();
    let mut fiber_of = Vec::new();
    for [id, fiber] in &d.elements {
        ids.push(id.clone());
        fiber_of.push(
            base.index_of(fiber)
                .ok_or_else(|| Violation::new("unknown-vertex", fiber.clone()))?,
        );
    }
    let index: HashMap<&str, usize> =
        ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut op = HashMap::new();
    for [x, y, v] in &d.triangle {
        let lookup = |s: &String| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Violation::new("unknown-element", s.clone()))
        };
        op.insert((lookup(x)?, lookup(y)?), lookup(v)?);
    }
    let l = RackBundle { base, ids, fiber_of, op };
    crate::rack::check_rack_bundle(&l)?;
    Ok(l)
}

pub fn face_model_from_doc(d: &FaceModelDoc) -> Check<FaceModel> {
    let h = quiver_from_doc(&d.horizontal)?;
    let v = quiver_from_doc(&d.vertical)?;
    let mut boxes = Vec::new();
    for [top, left, right, bottom, w] in &d.boxes {
        boxes.push(crate::linear::FaceBox {
            top: arrow_of(&h, top)?,
            left: arrow_of(&v, left)?,
            right: arrow_of(&v, right)?,
            bottom: arrow_of(&h, bottom)?,
            weight: parse_scalar(w)?,
        });
    }
    let fm = FaceModel { h, v, boxes };
    crate::linear::check_face_model(&fm)?;
    Ok(fm)
}

pub fn braided_from_doc(d: &BraidedGroupoidDoc) -> Check<crate::braided::BraidedGroupoid> {
    let g = groupoid_from_doc(&d.groupoid)?;
    let q = g.quiver().clone();
    let mut lact = HashMap::new();
    for [f, h, v] in &d.lact {
        lact.insert((arrow_of(&q, f)?, arrow_of(&q, h)?), arrow_of(&q, v)?);
    }
    let mut ract = HashMap::new();
    for [f, h, v] in &d.ract {
        ract.insert((arrow_of(&q, f)?, arrow_of(&q, h)?), arrow_of(&q, v)?);
    }
    crate::braided::check_braided_groupoid(&g, &lact, &ract)
}

/// Validate whatever a document claims to be; the payload is rebuilt
/// through the type-level constructors, which run every invariant.
pub fn validate(d: &Document) -> Check<()> {
    match &d.body {
        Body::Quiver(x) => quiver_from_doc(x).map(|_| ()),
        Body::Groupoid(x) => groupoid_from_doc(x).map(|_| ()),
        Body::Solution(x) => solution_from_doc(x).map(|_| ()),
        Body::MatchedPair(x) => {
            let v = groupoid_from_doc(&x.v)?;
            let h = groupoid_from_doc(&x.h)?;
            let (vq, hq) = (v.quiver().clone(), h.quiver().clone());
            let mut lact = HashMap::new();
            for [a, b, c] in &x.lact {
                lact.insert((arrow_of(&hq, a)?, arrow_of(&vq, b)?), arrow_of(&vq, c)?);
            }
            let mut ract = HashMap::new();
            for [a, b, c] in &x.ract {
                ract.insert((arrow_of(&hq, a)?, arrow_of(&vq, b)?), arrow_of(&hq, c)?);
            }
            crate::matched::check_matched_pair(&v, &h, &lact, &ract).map(|_| ())
        }
        Body::RackBundle(x) => rack_from_doc(x).map(|_| ()),
        Body::FaceModel(x) => face_model_from_doc(x).map(|_| ()),
        Body::BraidedGroupoid(x) => braided_from_doc(x).map(|_| ()),
        Body::Matrix(x) => {
            for e in &x.entries {
                parse_scalar(&e[4])?;
                if e[1] != e[3] {
                    return Err(Violation::new("graded-entry", format!("{e:?}")));
                }
            }
            Ok(())
        }
        Body::StructuralPair(x) => {
            solution_from_doc(&x.solution)?;
            groupoid_from_doc(&x.groupoid)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::flip_braided;
    use crate::fixtures;
    use crate::linear::{constant_cocycle, face_model_from_solution};
    use crate::rack::trivial_rack;
    use crate::solution::flip_solution;
    use num_traits::One;

    fn flip_l2() -> NonDegenerateSolution {
        check_nondegenerate(&flip_solution(&fixtures::l2()).unwrap()).unwrap()
    }

    #[test]
    fn documents_roundtrip() {
        let s = flip_l2();
        let fm = face_model_from_solution(&s, &constant_cocycle(&s, Scalar::one())).unwrap();
        let docs = vec![
            wrap(Body::Quiver(quiver_doc(&fixtures::l2()))),
            wrap(Body::Groupoid(groupoid_doc(&fixtures::z3()))),
            wrap(Body::Solution(solution_doc(&s))),
            wrap(Body::RackBundle(rack_doc(&trivial_rack(&fixtures::l2()).unwrap()))),
            wrap(Body::FaceModel(face_model_doc(&fm))),
            wrap(Body::BraidedGroupoid(braided_doc(
                &flip_braided(&fixtures::z2()).unwrap(),
            ))),
            wrap(Body::MatchedPair(matched_pair_doc(
                &crate::matched::trivial_matched_pair(&fixtures::z2(), &fixtures::z3()).unwrap(),
            ))),
            wrap(Body::Matrix(matrix_doc(
                &crate::linear::sigma_q(&s, &constant_cocycle(&s, Scalar::one())).unwrap(),
            ))),
            wrap(Body::StructuralPair(structural_pair_doc(
                &crate::braided::reduced_structure_groupoid(&s).unwrap(),
                &s,
            ))),
        ];
        for d in docs {
            let text = to_json(&d);
            let back = from_json(&text).unwrap();
            assert_eq!(back, d);
            validate(&back).unwrap();
            // byte-stable re-serialization
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn structural_conversions_recover_values() {
        let g = fixtures::s3();
        let g2 = groupoid_from_doc(&groupoid_doc(&g)).unwrap();
        for (f, h) in g.composable_pairs() {
            assert_eq!(g.compose(f, h), g2.compose(f, h));
        }
        let s = flip_l2();
        let s2 = solution_from_doc(&solution_doc(&s)).unwrap();
        assert_eq!(s.sigma_perm(), s2.sigma_perm());
        let l = trivial_rack(&fixtures::loop_bundle(&[2, 1])).unwrap();
        let l2 = rack_from_doc(&rack_doc(&l)).unwrap();
        assert_eq!(l.op, l2.op);
    }

    proptest::proptest! {
        #[test]
        fn random_quiver_documents_roundtrip(
            n_vertices in 1usize..5,
            arrows in proptest::collection::vec((0usize..5, 0usize..5), 0..8),
        ) {
            let vertices: Vec<String> = (0..n_vertices).map(|i| format!("v{i}")).collect();
            let arrows: Vec<[String; 3]> = arrows
                .iter()
                .enumerate()
                .map(|(i, &(s, e))| {
                    [format!("a{i}"), format!("v{}", s % n_vertices), format!("v{}", e % n_vertices)]
                })
                .collect();
            let d = wrap(Body::Quiver(QuiverDoc { vertices, arrows }));
            let text = to_json(&d);
            let back = from_json(&text).unwrap();
            proptest::prop_assert_eq!(&back, &d);
            proptest::prop_assert_eq!(to_json(&back), text);
            validate(&back).unwrap();
        }
    }

    #[test]
    fn bad_documents_rejected() {
        assert_eq!(from_json("{not json").unwrap_err().rule, "parse");
        let err = from_json(r#"{"version": 99, "kind": "quiver", "vertices": [], "arrows": []}"#)
            .unwrap_err();
        assert_eq!(err.rule, "version");
        // a solution that is not bijective fails validation
        let mut d = solution_doc(&flip_l2());
        d.sigma[0] = d.sigma[1].clone();
        assert!(validate(&wrap(Body::Solution(d))).is_err());
        assert!(parse_scalar("1/0").is_err());
        assert_eq!(parse_scalar("-3/4").unwrap(), crate::linear::frac(-3, 4));
        assert_eq!(parse_scalar("7").unwrap(), crate::linear::sc(7));
    }
}
