//! Reduced words over the double of a quiver: the free groupoid F(A) at the
//! level of its canonical representatives. F(A) itself is never
//! materialized; only reduced words and the operations on them exist.

use crate::groupoid::FiniteGroupoid;
use crate::quiver::{Arrow, FiniteQuiver, SignedArrow, Vertex};
use crate::{Check, Violation};
use std::collections::BTreeSet;

/// A word: a source vertex and a composable sequence of signed arrows.
/// The empty word is the identity at its vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub src: Vertex,
    pub letters: Vec<SignedArrow>,
}

impl Word {
    pub fn identity(v: Vertex) -> Self {
        Word { src: v, letters: Vec::new() }
    }

    pub fn single(q: &FiniteQuiver, x: SignedArrow) -> Self {
        Word { src: q.dsrc(x), letters: vec![x] }
    }

    pub fn new(q: &FiniteQuiver, src: Vertex, letters: Vec<SignedArrow>) -> Check<Self> {
        let w = Word { src, letters };
        w.check_composable(q)?;
        Ok(w)
    }

    pub fn check_composable(&self, q: &FiniteQuiver) -> Check<()> {
        let mut at = self.src;
        for &x in &self.letters {
            if q.dsrc(x) != at {
                return Err(Violation::new(
                    "word-composability",
                    format!("letter {} does not start where the previous ends", q.signed_id(x)),
                ));
            }
            at = q.dend(x);
        }
        Ok(())
    }

    pub fn end(&self, q: &FiniteQuiver) -> Vertex {
        self.letters.last().map(|&x| q.dend(x)).unwrap_or(self.src)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// No adjacent pair x, x⁻¹.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Render as the CLI literal, e.g. `a b a^-1`; identities as `id:<vertex>`.
    pub fn literal(&self, q: &FiniteQuiver) -> String {
        if self.letters.is_empty() {
            format!("id:{}", q.base().name(self.src))
        } else {
            self.letters.iter().map(|&x| q.signed_id(x)).collect::<Vec<_>>().join(" ")
        }
    }
}

/// The suffix-cancellation stack pass: the unique reduced word equivalent
/// to `w`. W_{i+1} = X when W_i has reduced form X·x_{i+1}⁻¹, otherwise
/// W_i·x_{i+1}; amortized linear.
pub fn w_process(q: &FiniteQuiver, w: &Word) -> Check<Word> {
    w.check_composable(q)?;
    let mut stack: Vec<SignedArrow> = Vec::with_capacity(w.letters.len());
    for &x in &w.letters {
        if stack.last() == Some(&x.inv()) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    Ok(Word { src: w.src, letters: stack })
}

/// Juxtaposition followed by reduction.
pub fn word_multiply(q: &FiniteQuiver, u: &Word, v: &Word) -> Check<Word> {
    if u.end(q) != v.src {
        return Err(Violation::new("word-composable", "end(u) ≠ src(v)"));
    }
    let mut letters = u.letters.clone();
    letters.extend(v.letters.iter().copied());
    w_process(q, &Word { src: u.src, letters })
}

/// w⁻¹ = x_n⁻¹ … x_1⁻¹; reduced whenever w is.
pub fn word_inverse(q: &FiniteQuiver, u: &Word) -> Word {
    let letters = u.letters.iter().rev().map(|&x| x.inv()).collect();
    Word { src: u.end(q), letters }
}

/// The multiplicative extension of a labeling ν: arrows of A → arrows of G
/// over the same base to words: equivalent words evaluate equally.
pub fn evaluate_word(
    q: &FiniteQuiver,
    g: &FiniteGroupoid,
    nu: &[Arrow],
    w: &Word,
) -> Check<Arrow> {
    if q.base() != g.base() {
        return Err(Violation::new("same-base", "evaluation into a groupoid over another base"));
    }
    w.check_composable(q)?;
    for a in q.arrows() {
        if g.src(nu[a]) != q.src(a) || g.end(nu[a]) != q.end(a) {
            return Err(Violation::new("labeling-endpoints", q.id(a).to_string()));
        }
    }
    let mut acc = g.identity_at(w.src);
    for &x in &w.letters {
        let step = if x.pos { nu[x.arrow] } else { g.inverse(nu[x.arrow]) };
        acc = g.compose(acc, step);
    }
    Ok(acc)
}

/// Breadth-first saturation: the wide subgroupoid of G generated by S
/// (closure of S ∪ S⁻¹ ∪ identities under composition), as an arrow set.
pub fn subgroupoid_generated(g: &FiniteGroupoid, s: &BTreeSet<Arrow>) -> BTreeSet<Arrow> {
    let mut closed: BTreeSet<Arrow> = s.clone();
    closed.extend(s.iter().map(|&f| g.inverse(f)));
    closed.extend(g.base().iter().map(|v| g.identity_at(v)));
    let mut frontier: Vec<Arrow> = closed.iter().copied().collect();
    while let Some(f) = frontier.pop() {
        let partners: Vec<Arrow> = closed.iter().copied().collect();
        for h in partners {
            for fg in [g.try_compose(f, h), g.try_compose(h, f)].into_iter().flatten() {
                if closed.insert(fg) {
                    frontier.push(fg);
                }
            }
        }
    }
    closed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quiver::double;

    fn pos(a: Arrow) -> SignedArrow {
        SignedArrow::pos(a)
    }

    fn neg(a: Arrow) -> SignedArrow {
        SignedArrow::neg(a)
    }

    #[test]
    fn w_process_cancels() {
        let k2 = fixtures::k2();
        let w = Word::new(&k2, 0, vec![pos(0), neg(0)]).unwrap();
        let r = w_process(&k2, &w).unwrap();
        assert_eq!(r, Word::identity(0));

        let l2 = fixtures::l2();
        let w = Word::new(&l2, 0, vec![pos(0), pos(1), neg(1), pos(0)]).unwrap();
        let r = w_process(&l2, &w).unwrap();
        assert_eq!(r.letters, vec![pos(0), pos(0)]);
    }

    /// Naive oracle: repeatedly scan for an adjacent inverse pair and delete.
    fn naive_reduce(w: &Word) -> Word {
        let mut letters = w.letters.clone();
        loop {
            let hit = (0..letters.len().saturating_sub(1))
                .find(|&i| letters[i] == letters[i + 1].inv());
            match hit {
                Some(i) => {
                    letters.drain(i..i + 2);
                }
                None => break,
            }
        }
        Word { src: w.src, letters }
    }

    /// Every word of length ≤ n over double(A), as raw letter sequences.
    pub(crate) fn all_words_up_to(q: &FiniteQuiver, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = q.base().iter().map(Word::identity).collect();
        let mut layer = out.clone();
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                let at = w.end(q);
                for x in q.signed_arrows() {
                    if q.dsrc(x) == at {
                        let mut letters = w.letters.clone();
                        letters.push(x);
                        next.push(Word { src: w.src, letters });
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn w_process_matches_naive_oracle_exhaustively() {
        for q in [fixtures::l2(), fixtures::k2()] {
            for w in all_words_up_to(&q, 6) {
                assert_eq!(w_process(&q, &w).unwrap(), naive_reduce(&w));
            }
        }
    }

    #[test]
    fn word_group_laws() {
        let l2 = fixtures::l2();
        let u = Word::new(&l2, 0, vec![pos(0), pos(1)]).unwrap();
        let v = Word::new(&l2, 0, vec![neg(1)]).unwrap();
        assert_eq!(word_multiply(&l2, &u, &v).unwrap().letters, vec![pos(0)]);
        assert_eq!(word_inverse(&l2, &u).letters, vec![neg(1), neg(0)]);
        let ui = word_inverse(&l2, &u);
        assert_eq!(word_multiply(&l2, &u, &ui).unwrap(), Word::identity(0));
    }

    #[test]
    fn associativity_exhaustive_small() {
        let l2 = fixtures::l2();
        let words = all_words_up_to(&l2, 2);
        for u in &words {
            for v in &words {
                for w in &words {
                    let uv = word_multiply(&l2, u, v).unwrap();
                    let vw = word_multiply(&l2, v, w).unwrap();
                    assert_eq!(
                        word_multiply(&l2, &uv, w).unwrap(),
                        word_multiply(&l2, u, &vw).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn evaluate_into_coarse() {
        // A = one arrow p → q; every word evaluates into the coarse groupoid P²
        let k2 = fixtures::k2();
        let c = crate::groupoid::coarse_groupoid(k2.base());
        let nu = vec![c.quiver().arrow_by_id("(p,q)").unwrap()];
        let w = Word::new(&k2, 0, vec![pos(0), neg(0), pos(0)]).unwrap();
        let e = evaluate_word(&k2, &c, &nu, &w).unwrap();
        assert_eq!(c.id(e), "(p,q)");
        let idw = Word::identity(1);
        assert!(c.is_identity(evaluate_word(&k2, &c, &nu, &idw).unwrap()));
    }

    #[test]
    fn evaluate_multiplicative() {
        let l2 = fixtures::l2();
        let g = fixtures::z4();
        let nu = vec![1, 2]; // a ↦ g1, b ↦ g2
        let words = all_words_up_to(&l2, 3);
        for u in &words {
            for v in &words {
                let uv = word_multiply(&l2, u, v).unwrap();
                let lhs = evaluate_word(&l2, &g, &nu, &uv).unwrap();
                let rhs = g.compose(
                    evaluate_word(&l2, &g, &nu, u).unwrap(),
                    evaluate_word(&l2, &g, &nu, v).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn generated_subgroupoids() {
        let g = fixtures::z2();
        let all: BTreeSet<Arrow> = g.arrows().collect();
        assert_eq!(subgroupoid_generated(&g, &all), all);
        let empty = BTreeSet::new();
        assert_eq!(subgroupoid_generated(&g, &empty).len(), 1);
        let gen: BTreeSet<Arrow> = [1usize].into_iter().collect();
        assert_eq!(subgroupoid_generated(&g, &gen), all);
    }

    #[test]
    fn parallel_arrows_free_group_loops() {
        // n parallel arrows p → q: the words u_1 u_i⁻¹ generate all reduced
        // loop words of length ≤ 4 at p
        let n = 3;
        let q = FiniteQuiver::of(
            &["p", "q"],
            &[("u1", "p", "q"), ("u2", "p", "q"), ("u3", "p", "q")],
        );
        let gens: Vec<Word> = (1..n)
            .map(|i| Word::new(&q, 0, vec![pos(0), neg(i)]).unwrap())
            .collect();
        // close generator set under products/inverses up to length 4
        let mut loops: BTreeSet<Word> = gens.iter().cloned().collect();
        loops.insert(Word::identity(0));
        for g in &gens {
            loops.insert(word_inverse(&q, g));
        }
        loop {
            let mut grew = false;
            let snapshot: Vec<Word> = loops.iter().cloned().collect();
            for u in &snapshot {
                for v in &snapshot {
                    let uv = word_multiply(&q, u, v).unwrap();
                    if uv.len() <= 4 && loops.insert(uv) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let all_loops: Vec<Word> = all_words_up_to(&q, 4)
            .into_iter()
            .filter(|w| w.src == 0 && w.end(&q) == 0 && w.is_reduced())
            .collect();
        for w in all_loops {
            assert!(loops.contains(&w), "missing loop word {:?}", w.literal(&q));
        }
    }

    #[test]
    fn church_rosser_all_reduction_orders() {
        // every maximal sequence of single-pair eliminations reaches w_process(w)
        fn explore(q: &FiniteQuiver, w: &Word, target: &Word) {
            let hits: Vec<usize> = (0..w.letters.len().saturating_sub(1))
                .filter(|&i| w.letters[i] == w.letters[i + 1].inv())
                .collect();
            if hits.is_empty() {
                assert_eq!(w, target);
                return;
            }
            for i in hits {
                let mut letters = w.letters.clone();
                letters.drain(i..=i + 1);
                explore(q, &Word { src: w.src, letters }, target);
            }
        }
        for q in [fixtures::l2(), fixtures::k2()] {
            for w in all_words_up_to(&q, 5) {
                let target = w_process(&q, &w).unwrap();
                explore(&q, &w, &target);
            }
        }
        // the double of a quiver is itself a quiver; sanity: words over double(L2)
        let d = double(&fixtures::l2());
        assert_eq!(d.arrow_count(), 4);
    }
}
