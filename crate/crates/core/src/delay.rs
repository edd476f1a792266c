//! Longest common prefixes and output delays.
//!
//! The delay between two words is what remains of each once their longest
//! common prefix is removed. Delays compose: the delay of `(u·u2, v·v2)`
//! only depends on the delay of `(u, v)` and on `(u2, v2)`.

use crate::error::{DelayError, EmptySet};

/// An output word: a sequence of single-character tokens.
pub type Word = Vec<char>;

/// Length of the longest common prefix of two slices.
pub fn common_prefix_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The longest word that prefixes every element of `words`.
pub fn lcp<'a, T, I>(words: I) -> Result<Vec<T>, EmptySet>
where
    T: PartialEq + Clone + 'a,
    I: IntoIterator<Item = &'a [T]>,
{
    let mut iter = words.into_iter();
    let first = iter.next().ok_or(EmptySet)?;
    let mut len = first.len();
    for word in iter {
        len = len.min(common_prefix_len(&first[..len], word));
    }
    Ok(first[..len].to_vec())
}

/// A pair of words with no common first symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DelayPair {
    left: Word,
    right: Word,
}

impl DelayPair {
    pub fn empty() -> Self {
        DelayPair::default()
    }

    pub fn left(&self) -> &[char] {
        &self.left
    }

    pub fn right(&self) -> &[char] {
        &self.right
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// Length of the longer component.
    pub fn max_len(&self) -> usize {
        self.left.len().max(self.right.len())
    }

    pub fn into_parts(self) -> (Word, Word) {
        (self.left, self.right)
    }
}

impl std::fmt::Display for DelayPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", show(&self.left), show(&self.right))
    }
}

/// Renders a word, with `ε` for the empty word.
pub fn show(word: &[char]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        word.iter().collect()
    }
}

/// Δ(u, v).
pub fn delta(u: &[char], v: &[char]) -> DelayPair {
    let k = common_prefix_len(u, v);
    DelayPair { left: u[k..].to_vec(), right: v[k..].to_vec() }
}

/// Δ(d.left·u2, d.right·v2).
pub fn delta_extend(d: &DelayPair, u2: &[char], v2: &[char]) -> DelayPair {
    let mut left = Vec::with_capacity(d.left.len() + u2.len());
    left.extend_from_slice(&d.left);
    left.extend_from_slice(u2);
    let mut right = Vec::with_capacity(d.right.len() + v2.len());
    right.extend_from_slice(&d.right);
    right.extend_from_slice(v2);
    let k = common_prefix_len(&left, &right);
    if k > 0 {
        left.drain(..k);
        right.drain(..k);
    }
    DelayPair { left, right }
}

/// Decides Δ(A,B) ≠ Δ(C,D) positionally.
///
/// Requires |A| − |B| = |C| − |D| ≥ 0. Writing `l, m, n, p` for the lengths
/// of `A, B, C, D` and `x_i` for the 1-based `i`-th symbol of `x`, the
/// delays differ iff one of these holds:
///
/// 1. some `k` has `a_{l−k} ≠ b_{l−k}` and either `k ≥ |C|` or `c_{n−k} = d_{n−k}`;
/// 2. some `k` has `c_{n−k} ≠ d_{n−k}` and either `k ≥ |A|` or `a_{l−k} = b_{l−k}`;
/// 3. some `k` has `a_{l−k} ≠ c_{n−k}` and either `k < l − m` or some `k'`
///    has `a_{k'} ≠ b_{k'}` with `k + k' ≤ l`;
/// 4. some `k, k'` have `b_{m−k} ≠ d_{p−k}`, `a_{k'} ≠ b_{k'}` and `k + k' ≤ m`.
///
/// A comparison that mentions a position outside its word is false.
pub fn delay_mismatch(a: &[char], b: &[char], c: &[char], d: &[char]) -> Result<bool, DelayError> {
    let (l, m, n, p) = (a.len(), b.len(), c.len(), d.len());
    if l < m || n < p || l - m != n - p {
        return Err(DelayError::PremiseViolated { a: l, b: m, c: n, d: p });
    }
    let sym = |w: &[char], i: isize| -> Option<char> {
        (i >= 1 && i as usize <= w.len()).then(|| w[i as usize - 1])
    };
    let differ = |x: Option<char>, y: Option<char>| matches!((x, y), (Some(x), Some(y)) if x != y);
    let agree = |x: Option<char>, y: Option<char>| matches!((x, y), (Some(x), Some(y)) if x == y);
    let (l, m, n, p) = (l as isize, m as isize, n as isize, p as isize);
    // Every k outside 0..span makes all positions l−k, m−k, n−k, p−k vanish.
    let span = l.max(n);

    // Smallest k' with a_{k'} ≠ b_{k'}; conditions 3 and 4 only need the smallest.
    let first_ab = (1..=m).find(|&i| differ(sym(a, i), sym(b, i)));

    let cond1 = (0..span).any(|k| differ(sym(a, l - k), sym(b, l - k)) && (k >= n || agree(sym(c, n - k), sym(d, n - k))));
    let cond2 = (0..span).any(|k| differ(sym(c, n - k), sym(d, n - k)) && (k >= l || agree(sym(a, l - k), sym(b, l - k))));
    let cond3 = (0..span).any(|k| {
        differ(sym(a, l - k), sym(c, n - k)) && (k < l - m || first_ab.is_some_and(|i| k + i <= l))
    });
    let cond4 = (0..span).any(|k| {
        differ(sym(b, m - k), sym(d, p - k)) && first_ab.is_some_and(|i| k + i <= m)
    });
    Ok(cond1 || cond2 || cond3 || cond4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.chars().collect()
    }

    #[test]
    fn lcp_examples() {
        assert_eq!(lcp([&w("abc")[..], &w("abde")[..]]).unwrap(), w("ab"));
        assert_eq!(lcp([&w("u")[..]]).unwrap(), w("u"));
        assert_eq!(lcp([&w("aa")[..], &w("ba")[..]]).unwrap(), w(""));
        assert_eq!(lcp(std::iter::empty::<&[char]>()), Err(EmptySet));
    }

    #[test]
    fn delta_examples() {
        let d = delta(&w("abc"), &w("abde"));
        assert_eq!((d.left(), d.right()), (&w("c")[..], &w("de")[..]));
        assert!(delta(&w("xyz"), &w("xyz")).is_empty());
        let d = delta(&w("aac"), &w("bbc"));
        assert_eq!((d.left(), d.right()), (&w("aac")[..], &w("bbc")[..]));
    }

    #[test]
    fn delta_extend_examples() {
        assert_eq!(delta_extend(&DelayPair::empty(), &w("x"), &w("y")), delta(&w("x"), &w("y")));
        assert_eq!(delta_extend(&delta(&w("aa"), &w("bb")), &w("c"), &w("c")), delta(&w("aac"), &w("bbc")));
        assert_eq!(delta_extend(&delta(&w("ab"), &w("ab")), &w("c"), &w("d")), delta(&w("c"), &w("d")));
    }

    #[test]
    fn mismatch_examples() {
        assert!(!delay_mismatch(&w("ab"), &w("b"), &w("ab"), &w("b")).unwrap());
        assert!(delay_mismatch(&w("aac"), &w("bbc"), &w("aacac"), &w("bbcbc")).unwrap());
        assert!(matches!(
            delay_mismatch(&w("a"), &w("ab"), &w("a"), &w("ab")),
            Err(DelayError::PremiseViolated { .. })
        ));
        assert!(delay_mismatch(&w("ab"), &w("a"), &w(""), &w("")).is_err());
    }

    fn word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c']), 0..max)
    }

    /// Quadruples with |A| − |B| = |C| − |D| ≥ 0 over a two-letter alphabet.
    fn quadruple() -> impl Strategy<Value = (Word, Word, Word, Word)> {
        (0usize..4, 0usize..6, 0usize..6).prop_flat_map(|(shift, m, p)| {
            let sym = || prop::sample::select(vec!['a', 'b']);
            (
                prop::collection::vec(sym(), m + shift),
                prop::collection::vec(sym(), m),
                prop::collection::vec(sym(), p + shift),
                prop::collection::vec(sym(), p),
            )
        })
    }

    proptest! {
        #[test]
        fn delta_strips_exactly_the_lcp(u in word(8), v in word(8)) {
            let d = delta(&u, &v);
            let k = u.len() - d.left().len();
            prop_assert_eq!(&u[..k], &v[..k]);
            prop_assert_eq!(&u[k..], d.left());
            prop_assert_eq!(&v[k..], d.right());
            prop_assert!(d.left().is_empty() || d.left().first() != d.right().first());
        }

        #[test]
        fn extension_is_associative(u in word(6), v in word(6), u2 in word(6), v2 in word(6)) {
            let mut uu = u.clone();
            uu.extend(&u2);
            let mut vv = v.clone();
            vv.extend(&v2);
            prop_assert_eq!(delta_extend(&delta(&u, &v), &u2, &v2), delta(&uu, &vv));
        }

        #[test]
        fn positional_mismatch_matches_direct_comparison((a, b, c, d) in quadruple()) {
            let positional = delay_mismatch(&a, &b, &c, &d).unwrap();
            prop_assert_eq!(positional, delta(&a, &b) != delta(&c, &d));
        }
    }
}
