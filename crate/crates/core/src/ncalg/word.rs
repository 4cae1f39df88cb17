use std::fmt;

/// A single generator of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Q,
    P,
}

/// Ordered product of generators; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn q_pow(n: usize) -> Self {
        Word(vec![Letter::Q; n])
    }

    pub fn p_pow(n: usize) -> Self {
        Word(vec![Letter::P; n])
    }

    /// `q^a p^b`, the canonical shape.
    pub fn q_then_p(a: usize, b: usize) -> Self {
        let mut v = vec![Letter::Q; a];
        v.extend(std::iter::repeat_n(Letter::P, b));
        Word(v)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// All `Q` letters precede all `P` letters.
    pub fn is_canonical(&self) -> bool {
        self.first_pq().is_none()
    }

    /// Number of (P, Q) pairs with the P to the left; each rewrite at fixed
    /// length lowers it by one.
    pub fn inversions(&self) -> usize {
        let mut ps = 0;
        let mut inv = 0;
        for l in &self.0 {
            match l {
                Letter::P => ps += 1,
                Letter::Q => inv += ps,
            }
        }
        inv
    }

    /// Positions `k` with `word[k] = P`, `word[k + 1] = Q`.
    pub fn pq_positions(&self) -> Vec<usize> {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == Letter::P && w[1] == Letter::Q)
            .map(|(k, _)| k)
            .collect()
    }

    fn first_pq(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] == Letter::P && w[1] == Letter::Q)
    }

    /// Apply `PQ -> QP` at position `k`, returning the swapped word and the
    /// word with the pair deleted.
    pub(crate) fn rewrite_at(&self, k: usize) -> (Word, Word) {
        debug_assert!(self.0[k] == Letter::P && self.0[k + 1] == Letter::Q);
        let mut swapped = self.0.clone();
        swapped.swap(k, k + 1);
        let mut deleted = self.0.clone();
        deleted.drain(k..k + 2);
        (Word(swapped), Word(deleted))
    }

    /// Run-length form, e.g. `q^2 p q`.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((last, n)) if *last == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (idx, (l, n)) in self.runs().into_iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            let c = match l {
                Letter::Q => 'q',
                Letter::P => 'p',
            };
            if n == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}^{n}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{P, Q};

    #[test]
    fn inversions_and_canonical() {
        let w = Word::from_letters(vec![P, Q, P, Q]);
        assert_eq!(w.inversions(), 3);
        assert!(!w.is_canonical());
        assert_eq!(w.pq_positions(), vec![0, 2]);
        assert!(Word::q_then_p(3, 2).is_canonical());
        assert_eq!(Word::q_then_p(3, 2).inversions(), 0);
    }

    #[test]
    fn display_run_length() {
        let w = Word::from_letters(vec![Q, Q, P, Q]);
        assert_eq!(w.to_string(), "q^2 p q");
        assert_eq!(Word::identity().to_string(), "1");
    }
}
