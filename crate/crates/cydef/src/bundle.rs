//! Split bundles `V = O(a_1) + ... + O(a_r)` on the projective line, their
//! symmetric-power decomposition into line-bundle twists, and the Calabi-Yau
//! predicate.
//!
//! Fiber monomials `w_1^{m_1} ... w_r^{m_r}` are indexed by multi-indices.
//! The degree-d part of `Sym^d V*` splits into the twists `O(-m . a)` over
//! `|m| = d`, so all fiber dependence is handled structurally through
//! multi-indices and the base cohomology of the corresponding twists; nothing
//! multivariate is ever manipulated symbolically.

use std::fmt;

use crate::laurent::{LaurentPoly, Window};

/// The degree vector of a split bundle. All transition data is implicit:
/// the summand `O(a_j)` carries the transition `z^{-a_j}` of the fixed atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

impl SplitBundle {
    /// Panics on an empty degree vector.
    pub fn new(degrees: Vec<i64>) -> Self {
        assert!(!degrees.is_empty(), "bundle must have rank >= 1");
        SplitBundle { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, j: usize) -> i64 {
        self.degrees[j]
    }

    pub fn degree_sum(&self) -> i64 {
        self.degrees.iter().sum()
    }
}

impl std::str::FromStr for SplitBundle {
    type Err = String;

    /// Parse a comma-separated degree vector, e.g. `-1,-1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let degrees: Result<Vec<i64>, _> = s
            .split(',')
            .map(|part| part.trim().parse::<i64>())
            .collect();
        match degrees {
            Ok(d) if !d.is_empty() => Ok(SplitBundle::new(d)),
            Ok(_) => Err("empty degree vector".to_string()),
            Err(e) => Err(format!("bad degree vector '{s}': {e}")),
        }
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Exponent vector of a fiber monomial `w^m`.
///
/// Ordered graded-lexicographically: lower total degree first, then
/// lexicographically descending within a degree, so `(2,0) < (1,1) < (0,2)`.
/// Sorted containers therefore iterate in the same order every enumeration
/// in the crate produces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty());
        MultiIndex(entries)
    }

    pub fn zero(r: usize) -> Self {
        MultiIndex(vec![0; r])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn entry(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total degree `|m|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The twist pairing `m . a`.
    pub fn dot(&self, degrees: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(degrees)
            .map(|(&m, &a)| m as i64 * a)
            .sum()
    }

    /// `m + e_j`.
    pub fn plus(&self, j: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[j] += 1;
        MultiIndex(v)
    }

    /// `m - e_j`, if the entry allows it.
    pub fn minus(&self, j: usize) -> Option<MultiIndex> {
        if self.0[j] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[j] -= 1;
        Some(MultiIndex(v))
    }

    /// Monomial text like `w1^2*w2`, or `1` for the empty monomial.
    pub fn monomial_text(&self, var: &str, chart: &str) -> String {
        let mut parts = Vec::new();
        for (j, &m) in self.0.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let base = format!("{var}{}_{chart}", j + 1);
            if m == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{m}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `r` with `|m| = d`, in graded-lexicographic
/// order (lexicographically descending within the fixed degree). This is the
/// one global ordering used everywhere, so matrices are reproducible
/// bit-for-bit.
pub fn multi_indices(r: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(r: usize, d: u32, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
        if r == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=d).rev() {
            prefix.push(first);
            rec(r - 1, d - first, out, prefix);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(r, d, &mut raw, &mut Vec::new());
    raw.into_iter().map(MultiIndex).collect()
}

/// The components of `Sym^d V*`: each multi-index `|m| = d` together with the
/// degree `-m . a` of the twist it contributes.
pub fn sym_components(bundle: &SplitBundle, d: u32) -> Vec<(MultiIndex, i64)> {
    multi_indices(bundle.rank(), d)
        .into_iter()
        .map(|m| {
            let twist = -m.dot(bundle.degrees());
            (m, twist)
        })
        .collect()
}

/// Degree of the twist housing a horizontal coefficient at `m`: the
/// anticanonical degree 2 of the line minus `m . a`.
pub fn horiz_twist(bundle: &SplitBundle, m: &MultiIndex) -> i64 {
    2 - m.dot(bundle.degrees())
}

/// Degree of the twist housing a vertical coefficient at `(j, m)` (0-based
/// `j`): `a_j - m . a`.
pub fn vert_twist(bundle: &SplitBundle, j: usize, m: &MultiIndex) -> i64 {
    bundle.degree(j) - m.dot(bundle.degrees())
}

/// Whether the total space has trivial canonical bundle: the degree sum must
/// match the canonical degree -2 of the line. When it does, the product of
/// the tangent and bundle transition determinants is the constant -1, trivial
/// as a line bundle; the constant sign is documented rather than rescaled
/// away since only its logarithmic derivative ever enters a formula.
pub fn is_calabi_yau(bundle: &SplitBundle) -> bool {
    bundle.degree_sum() == -2
}

/// Logarithmic derivative of `det J * det V = -z^-(2 + sum a)` on the
/// overlap: `-(2 + sum a) z^-1`. Identically zero exactly in the Calabi-Yau
/// case.
pub fn kappa_derivative(bundle: &SplitBundle) -> LaurentPoly {
    kappa_derivative_in(bundle, Window::new(-2, 0))
}

/// Same, under a caller-supplied window.
pub fn kappa_derivative_in(bundle: &SplitBundle, window: Window) -> LaurentPoly {
    let c = -(2 + bundle.degree_sum());
    LaurentPoly::zpow(c, -1, window).expect("z^-1 fits any usable window")
}

/// A fiber-monomial coefficient: the data of one graded piece of a section
/// or cochain.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSection {
    pub m: MultiIndex,
    pub coeff: LaurentPoly,
}

/// Binomial count `C(d + r - 1, r - 1)` of degree-`d` monomials in `r`
/// variables.
pub fn monomial_count(r: usize, d: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(r - 1) as u128 {
        num *= d as u128 + i + 1;
        den *= i + 1;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(degrees: &[i64]) -> SplitBundle {
        SplitBundle::new(degrees.to_vec())
    }

    fn m(entries: &[u32]) -> MultiIndex {
        MultiIndex::new(entries.to_vec())
    }

    #[test]
    fn sym_components_examples() {
        let comps = sym_components(&b(&[-1, -1]), 2);
        assert_eq!(
            comps,
            vec![
                (m(&[2, 0]), 2),
                (m(&[1, 1]), 2),
                (m(&[0, 2]), 2),
            ]
        );

        let comps = sym_components(&b(&[0, -2]), 1);
        assert_eq!(comps, vec![(m(&[1, 0]), 0), (m(&[0, 1]), 2)]);

        let comps = sym_components(&b(&[3, 1, -2]), 0);
        assert_eq!(comps, vec![(m(&[0, 0, 0]), 0)]);
    }

    #[test]
    fn sym_component_counts() {
        for r in 1..=4 {
            for d in 0..=5 {
                let bundle = SplitBundle::new(vec![-1; r]);
                assert_eq!(sym_components(&bundle, d).len(), monomial_count(r, d));
            }
        }
    }

    #[test]
    fn horiz_twist_examples() {
        assert_eq!(horiz_twist(&b(&[0, -2]), &m(&[0, 1])), 4);
        assert_eq!(horiz_twist(&b(&[-3, 1]), &m(&[0, 4])), -2);
        assert_eq!(horiz_twist(&b(&[-1, -1]), &m(&[1, 1])), 4);
    }

    #[test]
    fn vert_twist_examples() {
        // j is 0-based here; the examples quote 1-based fiber labels.
        assert_eq!(vert_twist(&b(&[0, -2]), 1, &m(&[3, 0])), -2);
        assert_eq!(vert_twist(&b(&[-1, -1]), 0, &m(&[0, 0])), -1);
        assert_eq!(vert_twist(&b(&[2, -4]), 1, &m(&[1, 1])), -2);
    }

    #[test]
    fn vert_twist_relation() {
        let bundle = b(&[2, -4, 1]);
        for d in 0..4 {
            for mi in multi_indices(3, d) {
                for j in 0..3 {
                    assert_eq!(
                        vert_twist(&bundle, j, &mi),
                        horiz_twist(&bundle, &mi) + bundle.degree(j) - 2
                    );
                }
            }
        }
    }

    #[test]
    fn calabi_yau_predicate() {
        assert!(is_calabi_yau(&b(&[-1, -1])));
        assert!(is_calabi_yau(&b(&[0, -2])));
        assert!(!is_calabi_yau(&b(&[-1, -2])));
    }

    #[test]
    fn kappa_examples() {
        assert!(kappa_derivative(&b(&[-1, -1])).is_zero());
        assert!(kappa_derivative(&b(&[0, -2])).is_zero());
        let k = kappa_derivative(&b(&[-1, -2]));
        assert_eq!(k.to_string(), "z^-1");
    }

    #[test]
    fn kappa_iff_calabi_yau() {
        for degs in [&[-2i64][..], &[0, -2], &[1, -3], &[-1, -2], &[3], &[0, 0, -2]] {
            let bundle = b(degs);
            assert_eq!(is_calabi_yau(&bundle), kappa_derivative(&bundle).is_zero());
        }
    }

    #[test]
    fn graded_lex_order() {
        let ms = multi_indices(3, 2);
        assert_eq!(
            ms,
            vec![
                m(&[2, 0, 0]),
                m(&[1, 1, 0]),
                m(&[1, 0, 1]),
                m(&[0, 2, 0]),
                m(&[0, 1, 1]),
                m(&[0, 0, 2]),
            ]
        );
    }

    #[test]
    fn parse_degree_vectors() {
        let bundle: SplitBundle = "-1,-1".parse().unwrap();
        assert_eq!(bundle.degrees(), &[-1, -1]);
        assert!("".parse::<SplitBundle>().is_err());
        assert!("x".parse::<SplitBundle>().is_err());
    }

    #[test]
    fn monomial_text_forms() {
        assert_eq!(m(&[2, 1]).monomial_text("w", "b"), "w1_b^2*w2_b");
        assert_eq!(m(&[0, 0]).monomial_text("w", "b"), "1");
    }
}
