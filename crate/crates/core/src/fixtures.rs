//! Small named objects used throughout the test suite and shipped as JSON
//! documents in `fixtures/`: loop bundles, the single arrow, cyclic groups
//! as one-vertex groupoids, S3, and coarse groupoids.

use crate::groupoid::FiniteGroupoid;
use crate::quiver::FiniteQuiver;

/// L2: one vertex p with two loops a, b.
pub fn l2() -> FiniteQuiver {
    FiniteQuiver::of(&["p"], &[("a", "p", "p"), ("b", "p", "p")])
}

/// K2: a single arrow u: p → q.
pub fn k2() -> FiniteQuiver {
    FiniteQuiver::of(&["p", "q"], &[("u", "p", "q")])
}

/// A single loop a at p.
pub fn single_loop() -> FiniteQuiver {
    FiniteQuiver::of(&["p"], &[("a", "p", "p")])
}

/// Loop bundle over vertices v0, v1, ... with the given fiber sizes.
/// Arrows are named `x{vertex}{index}`.
pub fn loop_bundle(fibers: &[usize]) -> FiniteQuiver {
    let names: Vec<String> = (0..fibers.len()).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut arrows = Vec::new();
    for (v, &k) in fibers.iter().enumerate() {
        for j in 0..k {
            arrows.push((format!("x{v}{j}"), v, v));
        }
    }
    let base = crate::quiver::VertexSet::of(&refs);
    FiniteQuiver::new(base, arrows).expect("valid loop bundle")
}

/// The cyclic group of order n as a one-vertex groupoid; arrows g0 = id, g1, ...
pub fn cyclic_group(n: usize) -> FiniteGroupoid {
    assert!(n >= 1);
    let ids: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
    FiniteGroupoid::one_vertex_group(&ids, |i, j| (i + j) % n, |i| (n - i) % n)
}

/// Z2 = {1, g}.
pub fn z2() -> FiniteGroupoid {
    cyclic_group(2)
}

pub fn z3() -> FiniteGroupoid {
    cyclic_group(3)
}

pub fn z4() -> FiniteGroupoid {
    cyclic_group(4)
}

/// S3 as a one-vertex groupoid. Elements are the permutations of {0,1,2}
/// listed in lexicographic one-line order; s{i} composes left-to-right
/// (juxtaposition order: (fg)(x) = g(f(x))).
pub fn s3() -> FiniteGroupoid {
    let perms: Vec<[usize; 3]> =
        vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let ids: Vec<String> = (0..6).map(|i| format!("s{i}")).collect();
    let compose = |i: usize, j: usize| {
        let (f, g) = (perms[i], perms[j]);
        index(&[g[f[0]], g[f[1]], g[f[2]]])
    };
    let inverse = |i: usize| {
        let f = perms[i];
        let mut inv = [0usize; 3];
        for (k, &fk) in f.iter().enumerate() {
            inv[fk] = k;
        }
        index(&inv)
    };
    FiniteGroupoid::one_vertex_group(&ids, compose, inverse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        assert_eq!(l2().arrow_count(), 2);
        assert_eq!(k2().arrow_count(), 1);
        assert_eq!(loop_bundle(&[2, 1]).arrow_count(), 3);
    }

    #[test]
    fn group_fixtures_validate() {
        for g in [z2(), z3(), z4(), s3()] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn s3_is_not_abelian() {
        let g = s3();
        let mut abelian = true;
        for f in g.arrows() {
            for h in g.arrows() {
                if g.compose(f, h) != g.compose(h, f) {
                    abelian = false;
                }
            }
        }
        assert!(!abelian);
    }
}
