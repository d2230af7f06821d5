//! Laurent polynomials in one variable over the rationals, with an explicit
//! exponent window.
//!
//! On the two-chart atlas of the projective line every cochain restricted to
//! the overlap is a Laurent polynomial in the affine coordinate `z`. All
//! truncation risk in the crate is concentrated in the window carried by
//! these values: an operation whose true result would leave the window is a
//! hard error, never a silent truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rint, Rational};

/// Inclusive exponent range `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty window [{lo},{hi}]");
        Window { lo, hi }
    }

    /// Symmetric window of half-width `w`.
    pub fn symmetric(w: i64) -> Self {
        Window::new(-w, w)
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    /// Reflection through zero, the image window under `z -> 1/z`.
    pub fn reflected(&self) -> Self {
        Window::new(-self.hi, -self.lo)
    }

    /// Grown by `margin` on both ends.
    pub fn enlarged(&self, margin: i64) -> Self {
        Window::new(self.lo - margin, self.hi + margin)
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// Exact Laurent polynomial with an explicit window. Stored coefficients are
/// never zero and all stored exponents lie inside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
    window: Window,
}

impl LaurentPoly {
    pub fn zero(window: Window) -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
            window,
        }
    }

    /// The monomial `c * z^k`.
    pub fn monomial(coeff: Rational, k: i64, window: Window) -> Result<Self> {
        let mut p = LaurentPoly::zero(window);
        p.add_term(k, coeff)?;
        Ok(p)
    }

    /// Integer-coefficient monomial, mostly for tests and basis elements.
    pub fn zpow(coeff: i64, k: i64, window: Window) -> Result<Self> {
        Self::monomial(rint(coeff), k, window)
    }

    /// Build from (exponent, coefficient) terms.
    pub fn from_terms(terms: &[(i64, Rational)], window: Window) -> Result<Self> {
        let mut p = LaurentPoly::zero(window);
        for (k, c) in terms {
            p.add_term(*k, c.clone())?;
        }
        Ok(p)
    }

    fn add_term(&mut self, k: i64, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !self.window.contains(k) {
            return Err(Error::WindowOverflow {
                exponent: k,
                lo: self.window.lo,
                hi: self.window.hi,
            });
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
        Ok(())
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    /// Same coefficients under a new window; errors if the support escapes.
    pub fn rewindow(&self, window: Window) -> Result<Self> {
        let mut p = LaurentPoly::zero(window);
        for (k, c) in self.terms() {
            p.add_term(k, c.clone())?;
        }
        Ok(p)
    }

    pub fn add(&self, other: &LaurentPoly) -> Self {
        assert_eq!(self.window, other.window, "window mismatch in add");
        let mut p = self.clone();
        for (k, c) in other.terms() {
            p.add_term(k, c.clone()).expect("support already windowed");
        }
        p
    }

    pub fn sub(&self, other: &LaurentPoly) -> Self {
        self.add(&other.scale(&rint(-1)))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return LaurentPoly::zero(self.window);
        }
        let mut p = LaurentPoly::zero(self.window);
        for (k, c) in self.terms() {
            p.coeffs.insert(k, c * factor);
        }
        p
    }

    /// Exponent-wise derivative `k z^(k-1)`; the window drops by one at the
    /// low end.
    pub fn derivative(&self) -> Self {
        let window = Window::new(self.window.lo - 1, self.window.hi);
        let mut p = LaurentPoly::zero(window);
        for (k, c) in self.terms() {
            if k != 0 {
                p.coeffs.insert(k - 1, c * rint(k));
            }
        }
        p
    }

    /// Exact convolution product. Errors with `WindowOverflow` if any product
    /// exponent leaves the working window (the shared window of the factors).
    pub fn multiply(&self, other: &LaurentPoly) -> Result<Self> {
        assert_eq!(self.window, other.window, "window mismatch in multiply");
        let mut p = LaurentPoly::zero(self.window);
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                p.add_term(k1 + k2, c1 * c2)?;
            }
        }
        Ok(p)
    }

    /// The substitution `z -> 1/z`: every exponent negates, the window
    /// reflects. This is the chart inversion of the fixed atlas.
    pub fn substitute_inverse(&self) -> Self {
        let mut p = LaurentPoly::zero(self.window.reflected());
        for (k, c) in self.terms() {
            p.coeffs.insert(-k, c.clone());
        }
        p
    }

    /// Multiply by the monomial `z^k`, shifting every exponent.
    pub fn shift(&self, k: i64) -> Result<Self> {
        let mut p = LaurentPoly::zero(self.window);
        for (e, c) in self.terms() {
            p.add_term(e + k, c.clone())?;
        }
        Ok(p)
    }

    /// Render with a custom variable name, e.g. `z_b`.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_one = mag.is_one();
            if k == 0 {
                out.push_str(&format_rat(&mag));
            } else {
                if !coeff_one {
                    out.push_str(&format_rat(&mag));
                    out.push('*');
                }
                out.push_str(var);
                if k != 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }
}

fn format_rat(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi)
    }

    #[test]
    fn derivative_of_cube() {
        let p = LaurentPoly::zpow(1, 3, w(-4, 4)).unwrap();
        let d = p.derivative();
        assert_eq!(d.coeff(2), rint(3));
        assert_eq!(d.support(), vec![2]);
        assert_eq!(d.window(), w(-5, 4));
    }

    #[test]
    fn derivative_of_inverse() {
        let p = LaurentPoly::zpow(1, -1, w(-4, 4)).unwrap();
        let d = p.derivative();
        assert_eq!(d.coeff(-2), rint(-1));
    }

    #[test]
    fn derivative_of_constant() {
        let p = LaurentPoly::zpow(5, 0, w(-4, 4)).unwrap();
        assert!(p.derivative().is_zero());
    }

    #[test]
    fn multiply_monomials() {
        let a = LaurentPoly::zpow(1, -1, w(-4, 4)).unwrap();
        let b = LaurentPoly::zpow(1, 2, w(-4, 4)).unwrap();
        let c = a.multiply(&b).unwrap();
        assert_eq!(c.support(), vec![1]);
        assert_eq!(c.coeff(1), rint(1));
    }

    #[test]
    fn multiply_binomials() {
        let one_plus = LaurentPoly::from_terms(&[(0, rint(1)), (1, rint(1))], w(-4, 4)).unwrap();
        let one_minus = LaurentPoly::from_terms(&[(0, rint(1)), (1, rint(-1))], w(-4, 4)).unwrap();
        let p = one_plus.multiply(&one_minus).unwrap();
        assert_eq!(p.coeff(0), rint(1));
        assert_eq!(p.coeff(1), rint(0));
        assert_eq!(p.coeff(2), rint(-1));
    }

    #[test]
    fn multiply_overflow_is_an_error() {
        let hi = 4;
        let a = LaurentPoly::zpow(1, hi, w(-4, hi)).unwrap();
        let b = LaurentPoly::zpow(1, 1, w(-4, hi)).unwrap();
        match a.multiply(&b) {
            Err(Error::WindowOverflow { exponent, .. }) => assert_eq!(exponent, hi + 1),
            other => panic!("expected WindowOverflow, got {other:?}"),
        }
    }

    #[test]
    fn substitute_inverse_examples() {
        let p = LaurentPoly::zpow(1, 2, w(-4, 4)).unwrap();
        assert_eq!(p.substitute_inverse().support(), vec![-2]);
        let q = LaurentPoly::from_terms(&[(0, rint(1)), (-1, rint(1))], w(-4, 4)).unwrap();
        let qi = q.substitute_inverse();
        assert_eq!(qi.coeff(0), rint(1));
        assert_eq!(qi.coeff(1), rint(1));
        assert!(LaurentPoly::zero(w(-4, 4)).substitute_inverse().is_zero());
    }

    #[test]
    fn display_forms() {
        let p = LaurentPoly::from_terms(
            &[(-2, rat(-1, 2)), (0, rint(3)), (1, rint(1))],
            w(-4, 4),
        )
        .unwrap();
        assert_eq!(p.to_string(), "-1/2*z^-2 + 3 + z");
        assert_eq!(LaurentPoly::zero(w(-1, 1)).to_string(), "0");
        let m = LaurentPoly::zpow(1, -1, w(-2, 2)).unwrap();
        assert_eq!(m.to_string(), "z^-1");
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i64..=6, -9i64..=9), 0..6).prop_map(|terms| {
            let window = w(-32, 32);
            let terms: Vec<(i64, Rational)> =
                terms.into_iter().map(|(k, c)| (k, rint(c))).collect();
            LaurentPoly::from_terms(&terms, window).unwrap()
        })
    }

    proptest! {
        #[test]
        fn leibniz_rule(p in arb_poly(), q in arb_poly()) {
            let lhs = p.multiply(&q).unwrap().derivative();
            let dw = lhs.window();
            let rhs = p
                .derivative()
                .rewindow(dw)
                .unwrap()
                .multiply(&q.rewindow(dw).unwrap())
                .unwrap()
                .add(
                    &p.rewindow(dw)
                        .unwrap()
                        .multiply(&q.derivative().rewindow(dw).unwrap())
                        .unwrap(),
                );
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitute_inverse_is_involutive(p in arb_poly()) {
            prop_assert_eq!(p.substitute_inverse().substitute_inverse(), p);
        }

        #[test]
        fn chain_rule_for_chart_inversion(p in arb_poly()) {
            // d/dz p(1/z) = -z^-2 * (dp)(1/z)
            let lhs = p.substitute_inverse().derivative();
            let dw = lhs.window();
            let minus_zm2 = LaurentPoly::zpow(-1, -2, dw).unwrap();
            let rhs = minus_zm2
                .multiply(&p.derivative().substitute_inverse().rewindow(dw).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
