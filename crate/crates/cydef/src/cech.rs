//! Two-chart Čech cohomology of line bundles `O(n)` on the projective line.
//!
//! The atlas is fixed once and for all: chart `beta` with coordinate `z`,
//! chart `alpha` with coordinate `u = 1/z`. A line bundle of degree `n`
//! carries the transition `phi_ab(z) = z^-n`, so a section pair satisfies
//! `s_a = z^-n s_b` on the overlap and `H^0(O(n))` comes out with dimension
//! `n + 1` for `n >= 0`.
//!
//! One-cochains live on the single overlap and are recorded in the
//! `beta`-trivialization as Laurent polynomials. With two charts there are no
//! triple overlaps, so `H^1` is exactly the cokernel of the single coboundary
//! map `(h_a, h_b) -> h_b - z^n h_a(1/z)` and `H^0` its kernel. The basis
//! produced for `H^1(O(n))` consists of the pure monomials
//! `z^(n+1) .. z^-1`; that closed form is checked against the cokernel
//! computation rather than assumed.
//!
//! The tangent sheaf transition is `J_ab = -z^-2`. The sign is deliberately
//! not normalized away into an identification with `O(2)`: connecting-map and
//! divergence formulas downstream are sensitive to it. Spans, and therefore
//! all dimensions and class reductions, are unaffected by column signs, so
//! the line-bundle machinery here applies to the twists of the tangent sheaf
//! as well.

use crate::error::{Error, Result};
use crate::exact::{cokernel_basis, rint, Cokernel, Rational, RationalMatrix};
use crate::laurent::{LaurentPoly, Window};

/// Margin required between the window edge and the outermost exponent any
/// coboundary computation touches.
pub const WINDOW_MARGIN: i64 = 2;

/// The fixed two-chart atlas of the projective line.
///
/// Chart `beta` has coordinate `z`, chart `alpha` has `u = 1/z`; the overlap
/// transition is `f_ab(z) = 1/z` with Jacobian `J_ab(z) = -z^-2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChartAtlas;

impl ChartAtlas {
    /// Jacobian `J_ab = -z^-2` of the chart transition, in `z`.
    pub fn jacobian(window: Window) -> Result<LaurentPoly> {
        LaurentPoly::zpow(-1, -2, window)
    }

    /// Jacobian `J_ba = -z_a^-2` expressed back in `z` (so `-z^2`).
    pub fn jacobian_inverse_chart(window: Window) -> Result<LaurentPoly> {
        LaurentPoly::zpow(-1, 2, window)
    }
}

/// A line bundle `O(n)` on the projective line under the fixed transition
/// convention `phi_ab(z) = z^-n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineBundle {
    pub degree: i64,
}

impl LineBundle {
    pub fn new(degree: i64) -> Self {
        LineBundle { degree }
    }

    /// Tensor product adds degrees.
    pub fn tensor(&self, other: &LineBundle) -> LineBundle {
        LineBundle::new(self.degree + other.degree)
    }

    /// Dual negates the degree.
    pub fn dual(&self) -> LineBundle {
        LineBundle::new(-self.degree)
    }
}

/// A basis of `H^0` or `H^1` of a line bundle, with class reduction for
/// `q = 1`.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub bundle: LineBundle,
    pub q: u8,
    pub basis: Vec<LaurentPoly>,
    pub window: Window,
    reducer: Option<Cokernel>,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the class of `c` in the basis. Zero exactly on
    /// coboundaries. Only meaningful for `q = 1`.
    pub fn reduce(&self, c: &LaurentPoly) -> Result<Vec<Rational>> {
        let reducer = self
            .reducer
            .as_ref()
            .expect("class reduction requires q = 1");
        for k in c.support() {
            if !self.window.contains(k) {
                return Err(Error::WindowTooSmall {
                    lo: self.window.lo,
                    hi: self.window.hi,
                    degree: self.bundle.degree,
                });
            }
        }
        let dense: Vec<Rational> = self.window.iter().map(|k| c.coeff(k)).collect();
        Ok(reducer.reduce(&dense))
    }
}

fn check_window(n: i64, w: Window) -> Result<()> {
    if w.lo <= std::cmp::min(-1, n + 1) - WINDOW_MARGIN && w.hi >= std::cmp::max(0, n) + WINDOW_MARGIN
    {
        Ok(())
    } else {
        Err(Error::WindowTooSmall {
            lo: w.lo,
            hi: w.hi,
            degree: n,
        })
    }
}

/// Matrix of the coboundary map `C^0 -> C^1` for `O(n)` on the exponent
/// window `w`.
///
/// Rows are indexed by overlap exponents `w.lo ..= w.hi`. Columns run over
/// the `beta`-chart monomials `z^j`, `0 <= j <= hi` (entry `+1` at exponent
/// `j`), then the `alpha`-chart monomials `u^j`, `0 <= j <= n - lo` (entry
/// `-1` at exponent `n - j`, the beta-trivialized image).
pub fn coboundary_matrix(n: i64, w: Window) -> Result<RationalMatrix> {
    check_window(n, w)?;
    let rows = w.len();
    let beta_cols = (w.hi + 1) as usize;
    let alpha_cols = (n - w.lo + 1).max(0) as usize;
    let mut m = RationalMatrix::zeros(rows, beta_cols + alpha_cols);
    for j in 0..beta_cols {
        m.set(j, j, rint(1));
    }
    for j in 0..alpha_cols {
        let exponent = n - j as i64;
        m.set((exponent - w.lo) as usize, beta_cols + j, rint(-1));
    }
    Ok(m)
}

/// Basis of `H^0(O(n))`: the monomials `z^0 .. z^n` for `n >= 0`, empty
/// otherwise.
pub fn h0_basis(n: i64) -> CohomologySpace {
    let window = Window::new(0, n.max(0));
    let basis = (0..=n)
        .map(|k| LaurentPoly::zpow(1, k, window).expect("monomial in window"))
        .collect();
    CohomologySpace {
        bundle: LineBundle::new(n),
        q: 0,
        basis,
        window,
        reducer: None,
    }
}

/// Basis of `H^1(O(n))` on the window `w`, produced from the cokernel of the
/// coboundary matrix. For `n <= -2` this is the monomials `z^(n+1) .. z^-1`.
pub fn h1_basis(n: i64, w: Window) -> Result<CohomologySpace> {
    let matrix = coboundary_matrix(n, w)?;
    let cok = cokernel_basis(&matrix);
    let basis = cok
        .basis_rows()
        .iter()
        .map(|&row| LaurentPoly::zpow(1, w.lo + row as i64, w).expect("basis row in window"))
        .collect();
    Ok(CohomologySpace {
        bundle: LineBundle::new(n),
        q: 1,
        basis,
        window: w,
        reducer: Some(cok),
    })
}

/// Coordinates of the class of `c` in the `H^1(O(n))` basis.
pub fn reduce_class(c: &LaurentPoly, n: i64, w: Window) -> Result<Vec<Rational>> {
    h1_basis(n, w)?.reduce(c)
}

/// Closed-form dimensions, used as cross-checks against the cokernel path.
pub fn h0_dim_closed_form(n: i64) -> usize {
    (n + 1).max(0) as usize
}

pub fn h1_dim_closed_form(n: i64) -> usize {
    (-n - 1).max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(half: i64) -> Window {
        Window::symmetric(half)
    }

    #[test]
    fn atlas_cocycle_identity() {
        // J_ab(z) * J_ba(1/z) = 1
        let window = w(8);
        let jab = ChartAtlas::jacobian(window).unwrap();
        let jba = ChartAtlas::jacobian_inverse_chart(window).unwrap();
        let prod = jab.multiply(&jba).unwrap();
        assert_eq!(prod.support(), vec![0]);
        assert_eq!(prod.coeff(0), rint(1));
    }

    #[test]
    fn line_bundle_tensor_and_dual() {
        let a = LineBundle::new(3);
        let b = LineBundle::new(-5);
        assert_eq!(a.tensor(&b).degree, -2);
        assert_eq!(b.dual().degree, 5);
    }

    #[test]
    fn coboundary_cokernel_for_minus_two() {
        // Column span misses exactly z^-1, at both windows.
        for half in [8, 16] {
            let m = coboundary_matrix(-2, w(half)).unwrap();
            let cok = cokernel_basis(&m);
            assert_eq!(cok.dim(), 1);
            assert_eq!(cok.basis_rows(), &[(-1 + half) as usize]);
        }
    }

    #[test]
    fn coboundary_full_span_for_degree_zero() {
        let m = coboundary_matrix(0, w(8)).unwrap();
        assert_eq!(cokernel_basis(&m).dim(), 0);
    }

    #[test]
    fn coboundary_empty_cokernel_for_positive_degree() {
        let m = coboundary_matrix(3, w(8)).unwrap();
        assert_eq!(cokernel_basis(&m).dim(), 0);
    }

    #[test]
    fn h0_examples() {
        let s = h0_basis(2);
        assert_eq!(s.dim(), 3);
        assert_eq!(
            s.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            vec!["1", "z", "z^2"]
        );
        assert_eq!(h0_basis(-1).dim(), 0);
        assert_eq!(h0_basis(0).basis[0].to_string(), "1");
    }

    #[test]
    fn h1_examples() {
        let s = h1_basis(-2, w(8)).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis[0].to_string(), "z^-1");

        let s = h1_basis(-5, w(8)).unwrap();
        assert_eq!(
            s.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            vec!["z^-4", "z^-3", "z^-2", "z^-1"]
        );

        assert_eq!(h1_basis(7, w(12)).unwrap().dim(), 0);
    }

    #[test]
    fn closed_form_and_duality_over_range() {
        for n in -10..=10 {
            for half in [16, 24] {
                let h1 = h1_basis(n, w(half)).unwrap().dim();
                assert_eq!(h1, h1_dim_closed_form(n), "h1(O({n})) at W={half}");
            }
            assert_eq!(h0_basis(n).dim(), h0_dim_closed_form(n));
            // Duality pattern: h1(O(n)) = h0(O(-2-n)).
            assert_eq!(h1_dim_closed_form(n), h0_dim_closed_form(-2 - n));
        }
    }

    #[test]
    fn reduce_class_examples() {
        let window = w(8);
        let c = LaurentPoly::zpow(1, -1, window).unwrap();
        assert_eq!(reduce_class(&c, -2, window).unwrap(), vec![rint(1)]);

        let c = LaurentPoly::from_terms(&[(3, rint(1)), (0, rint(1))], window).unwrap();
        assert_eq!(reduce_class(&c, -2, window).unwrap(), vec![rint(0)]);

        let c = LaurentPoly::zpow(4, -1, window).unwrap();
        assert!(reduce_class(&c, 2, window).unwrap().is_empty());
    }

    #[test]
    fn reduce_class_is_linear_and_kills_coboundaries() {
        let window = w(12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [-6, -4, -2, 0, 3] {
            for _ in 0..100 {
                // delta(h_a, h_b) = h_b - z^n h_a(1/z)
                let hb = random_poly(&mut rng, window, 0, 6);
                let ha = random_poly(&mut rng, window, 0, 6);
                let push = ha
                    .substitute_inverse()
                    .rewindow(window)
                    .unwrap()
                    .shift(n)
                    .unwrap();
                let cob = hb.sub(&push);
                let coords = reduce_class(&cob, n, window).unwrap();
                assert!(coords.iter().all(|x| x.is_zero()), "coboundary not killed");
            }
            // linearity on a random pair
            let space = h1_basis(n, window).unwrap();
            let c1 = random_poly(&mut rng, window, -7, 7);
            let c2 = random_poly(&mut rng, window, -7, 7);
            let lam = rat(3, 2);
            let lhs = space.reduce(&c1.add(&c2.scale(&lam))).unwrap();
            let rhs: Vec<Rational> = space
                .reduce(&c1)
                .unwrap()
                .iter()
                .zip(space.reduce(&c2).unwrap())
                .map(|(a, b)| a + b * &lam)
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn window_too_small_is_reported() {
        match coboundary_matrix(-2, Window::new(-2, 2)) {
            Err(Error::WindowTooSmall { .. }) => {}
            other => panic!("expected WindowTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn h1_reduce_is_identity_on_basis() {
        let s = h1_basis(-4, w(9)).unwrap();
        for (i, b) in s.basis.iter().enumerate() {
            let coords = s.reduce(b).unwrap();
            for (j, x) in coords.iter().enumerate() {
                assert_eq!(*x, if i == j { rint(1) } else { rint(0) });
            }
        }
    }

    #[test]
    fn window_stability_of_bases() {
        for n in -8..=3 {
            let a = h1_basis(n, w(10)).unwrap();
            let b = h1_basis(n, w(18)).unwrap();
            assert_eq!(a.dim(), b.dim());
            let sa: Vec<Vec<i64>> = a.basis.iter().map(|p| p.support()).collect();
            let sb: Vec<Vec<i64>> = b.basis.iter().map(|p| p.support()).collect();
            assert_eq!(sa, sb);
        }
    }

    fn random_poly(rng: &mut ChaCha8Rng, window: Window, lo: i64, hi: i64) -> LaurentPoly {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(0..5) {
            terms.push((rng.gen_range(lo..=hi), rint(rng.gen_range(-5..=5))));
        }
        LaurentPoly::from_terms(&terms, window).unwrap()
    }
}
