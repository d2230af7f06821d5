//! Graded first-order deformations of the total space of a split bundle.
//!
//! The cohomology of the tangent sheaf of the total space splits, after a
//! choice of complement, into a horizontal part coming from the twisted
//! tangent sheaf of the base and a vertical part coming from the bundle
//! itself, with the connecting map of the transition-coupling eating into the
//! raw vertical groups.
//!
//! Everything is graded by the fiber degree of the vector-field coefficient:
//! a horizontal coefficient `rho^(m)` with `|m| = d` and a vertical
//! coefficient `sigma^(j,m)` with `|m| = d` both belong to the degree-`d`
//! report row. The connecting map raises the vertical degree by one relative
//! to its horizontal source: on a beta-chart representative it acts as
//!
//! ```text
//! rho^(m)  |->  component (j, m + e_j):  -a_j z^-1 rho^(m)(z)
//! ```
//!
//! derived once from the coboundary of the horizontal lift on the fixed
//! atlas (the vertical leftover of pushing `rho w^m d/dz` across charts) and
//! validated against the brute-force total-space computation rather than
//! trusted: any sign or exponent slip surfaces as a dimension mismatch there.
//!
//! The non-canonical splitting is realized concretely: horizontal classes are
//! lifted with zero vertical part (legal on a two-chart cover, where every
//! 1-cochain is a cocycle), and the vertical quotient is presented by the
//! monomial classes at the non-pivot rows of the echelonized connecting-map
//! image.

use std::collections::BTreeMap;
use std::fmt;

use crate::bundle::{
    horiz_twist, kappa_derivative_in, multi_indices, vert_twist, MultiIndex, SplitBundle,
};
use crate::cech::{h0_basis, h1_basis, CohomologySpace};
use crate::error::Result;
use crate::exact::{pivot_rows, rank, rint, RationalMatrix, Rational};
use crate::laurent::{LaurentPoly, Window};

/// A first-order deformation cocycle: the graded horizontal coefficients
/// `rho^(m)` and vertical coefficients `sigma^(j,m)`, all beta-trivialized.
/// Fiber indices `j` are 0-based in code and printed 1-based.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DeformationCocycle {
    rho: BTreeMap<MultiIndex, LaurentPoly>,
    sigma: BTreeMap<(usize, MultiIndex), LaurentPoly>,
}

impl DeformationCocycle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_rho(m: MultiIndex, coeff: LaurentPoly) -> Self {
        let mut c = Self::zero();
        c.add_rho(m, coeff);
        c
    }

    pub fn with_sigma(j: usize, m: MultiIndex, coeff: LaurentPoly) -> Self {
        let mut c = Self::zero();
        c.add_sigma(j, m, coeff);
        c
    }

    pub fn add_rho(&mut self, m: MultiIndex, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.rho.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn add_sigma(&mut self, j: usize, m: MultiIndex, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.sigma.entry((j, m)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn rho(&self, m: &MultiIndex) -> Option<&LaurentPoly> {
        self.rho.get(m)
    }

    pub fn sigma(&self, j: usize, m: &MultiIndex) -> Option<&LaurentPoly> {
        self.sigma.get(&(j, m.clone()))
    }

    pub fn rho_terms(&self) -> impl Iterator<Item = (&MultiIndex, &LaurentPoly)> {
        self.rho.iter()
    }

    pub fn sigma_terms(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &LaurentPoly)> {
        self.sigma.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.rho.is_empty() && self.sigma.is_empty()
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &DeformationCocycle, factor: &Rational) -> Self {
        let mut out = self.clone();
        for (m, p) in other.rho_terms() {
            out.add_rho(m.clone(), p.scale(factor));
        }
        for ((j, m), p) in other.sigma_terms() {
            out.add_sigma(*j, m.clone(), p.scale(factor));
        }
        out
    }
}

impl fmt::Display for DeformationCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((j, m), p) in self.sigma_terms() {
            if !first {
                writeln!(f)?;
            }
            write!(f, "sigma^{{{},{}}} = {}", j + 1, m, p)?;
            first = false;
        }
        for (m, p) in self.rho_terms() {
            if !first {
                writeln!(f)?;
            }
            write!(f, "rho^{{{}}} = {}", m, p)?;
            first = false;
        }
        Ok(())
    }
}

/// One degree's worth of the deformation report.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub d: u32,
    pub h_horiz: usize,
    pub h_vert_raw: usize,
    pub rank_delta0: usize,
    pub h_vert: usize,
    pub total: usize,
    /// Dimension of the Calabi-Yau-preserving subspace, filled by the
    /// divergence-kernel computation.
    pub cy: usize,
    /// Explicit cocycle representatives: vertical quotient classes first,
    /// then horizontal classes.
    pub basis: Vec<DeformationCocycle>,
}

/// The horizontal components at fiber degree `d`: each multi-index with the
/// `H^1` space of its twist, plus offsets into the concatenated coordinates.
#[derive(Clone, Debug)]
pub struct HorizontalBlocks {
    pub components: Vec<(MultiIndex, CohomologySpace)>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
}

/// The vertical components `(j, m)` at sigma-degree `d`, each with the `H^1`
/// space of its twist.
#[derive(Clone, Debug)]
pub struct VerticalBlocks {
    pub components: Vec<(usize, MultiIndex, CohomologySpace)>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
}

fn h1_cached(
    cache: &mut BTreeMap<i64, CohomologySpace>,
    n: i64,
    w: Window,
) -> Result<CohomologySpace> {
    if let Some(s) = cache.get(&n) {
        return Ok(s.clone());
    }
    let s = h1_basis(n, w)?;
    cache.insert(n, s.clone());
    Ok(s)
}

/// Horizontal `H^1` blocks (twists `2 - m.a`) at fiber degree `d`.
pub fn horizontal_blocks(bundle: &SplitBundle, d: u32, w: Window) -> Result<HorizontalBlocks> {
    let mut cache = BTreeMap::new();
    let mut components = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for m in multi_indices(bundle.rank(), d) {
        let space = h1_cached(&mut cache, horiz_twist(bundle, &m), w)?;
        offsets.push(total);
        total += space.dim();
        components.push((m, space));
    }
    Ok(HorizontalBlocks {
        components,
        offsets,
        total_dim: total,
    })
}

/// Vertical `H^1` blocks (twists `a_j - m.a`) at sigma-degree `d`, ordered
/// by fiber index then multi-index.
pub fn vertical_blocks(bundle: &SplitBundle, d: u32, w: Window) -> Result<VerticalBlocks> {
    let mut cache = BTreeMap::new();
    let mut components = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for j in 0..bundle.rank() {
        for m in multi_indices(bundle.rank(), d) {
            let space = h1_cached(&mut cache, vert_twist(bundle, j, &m), w)?;
            offsets.push(total);
            total += space.dim();
            components.push((j, m, space));
        }
    }
    Ok(VerticalBlocks {
        components,
        offsets,
        total_dim: total,
    })
}

impl VerticalBlocks {
    /// Coordinate row of basis element `idx` of component `(j, m)`.
    pub fn row_of(&self, j: usize, m: &MultiIndex, idx: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|(cj, cm, _)| *cj == j && cm == m)
            .map(|c| self.offsets[c] + idx)
    }

    /// Reduce a vertical cochain (component `(j, m)`, overlap representative
    /// `p`) into concatenated class coordinates.
    pub fn reduce_into(
        &self,
        j: usize,
        m: &MultiIndex,
        p: &LaurentPoly,
        out: &mut [Rational],
    ) -> Result<()> {
        for (c, (cj, cm, space)) in self.components.iter().enumerate() {
            if *cj == j && cm == m {
                let coords = space.reduce(p)?;
                for (i, x) in coords.into_iter().enumerate() {
                    out[self.offsets[c] + i] += x;
                }
                return Ok(());
            }
        }
        Ok(())
    }
}

/// The `H^0` spaces feeding the connecting map at fiber degree `d`: global
/// sections of the twisted tangent sheaf, one block per multi-index.
pub fn h0_graded(
    bundle: &SplitBundle,
    d: u32,
    _w: Window,
) -> Result<Vec<(MultiIndex, CohomologySpace)>> {
    Ok(multi_indices(bundle.rank(), d)
        .into_iter()
        .map(|m| {
            let space = h0_basis(horiz_twist(bundle, &m));
            (m, space)
        })
        .collect())
}

/// Matrix of the connecting map out of fiber degree `d`: sources are the
/// `H^0` blocks of the twisted tangent sheaf, targets the vertical `H^1`
/// blocks at sigma-degree `d + 1`, in class coordinates.
pub fn connecting_map(bundle: &SplitBundle, d: u32, w: Window) -> Result<RationalMatrix> {
    connecting_map_impl(bundle, d, w, false)
}

/// Test hook: the same matrix with the exponent sign of the image formula
/// deliberately flipped (`-a_j z^-1 rho` becomes `-a_j z rho`). A bare
/// coefficient sign flip would rescale rows and leave every rank unchanged,
/// so the corruption flips the exponent instead; it exists only to prove the
/// verification catches a wrong connecting map.
#[doc(hidden)]
pub fn connecting_map_corrupted(bundle: &SplitBundle, d: u32, w: Window) -> Result<RationalMatrix> {
    connecting_map_impl(bundle, d, w, true)
}

pub(crate) fn connecting_map_impl(
    bundle: &SplitBundle,
    d: u32,
    w: Window,
    corrupt_exponent: bool,
) -> Result<RationalMatrix> {
    let sources = h0_graded(bundle, d, w)?;
    let targets = vertical_blocks(bundle, d + 1, w)?;
    let shift = if corrupt_exponent { 1 } else { -1 };
    let cols: usize = sources.iter().map(|(_, s)| s.dim()).sum();
    let mut matrix = RationalMatrix::zeros(targets.total_dim, cols);
    let mut col = 0;
    for (m, space) in &sources {
        for b in &space.basis {
            // b is the monomial z^t; its image in component (j, m + e_j) is
            // -a_j z^(tic) b with the exponent shift.
            let mut column = vec![Rational::zero(); targets.total_dim];
            for j in 0..bundle.rank() {
                let a_j = bundle.degree(j);
                if a_j == 0 {
                    continue;
                }
                let image = b
                    .rewindow(w)?
                    .shift(shift)?
                    .scale(&rint(-a_j));
                targets.reduce_into(j, &m.plus(j), &image, &mut column)?;
            }
            for (r, x) in column.into_iter().enumerate() {
                matrix.set(r, col, x);
            }
            col += 1;
        }
    }
    Ok(matrix)
}

/// A monomial basis of a complement of the connecting-map image inside the
/// vertical blocks at sigma-degree `d`.
#[derive(Clone, Debug)]
pub struct VerticalComplement {
    pub blocks: VerticalBlocks,
    /// (fiber index, multi-index, monomial representative, coordinate row).
    pub elements: Vec<(usize, MultiIndex, LaurentPoly, usize)>,
    pub rank_delta0: usize,
}

/// Echelon complement of the image of the connecting map out of degree
/// `d - 1` inside the vertical blocks at sigma-degree `d`.
pub fn vertical_complement(bundle: &SplitBundle, d: u32, w: Window) -> Result<VerticalComplement> {
    vertical_complement_impl(bundle, d, w, false)
}

pub(crate) fn vertical_complement_impl(
    bundle: &SplitBundle,
    d: u32,
    w: Window,
    corrupt: bool,
) -> Result<VerticalComplement> {
    let blocks = vertical_blocks(bundle, d, w)?;
    let (pivots, rank_delta0) = if d == 0 {
        (Vec::new(), 0)
    } else {
        let delta = connecting_map_impl(bundle, d - 1, w, corrupt)?;
        let pivots = pivot_rows(&delta);
        let r = pivots.len();
        (pivots, r)
    };
    let mut elements = Vec::new();
    for (c, (j, m, space)) in blocks.components.iter().enumerate() {
        for (i, b) in space.basis.iter().enumerate() {
            let row = blocks.offsets[c] + i;
            if !pivots.contains(&row) {
                elements.push((*j, m.clone(), b.clone(), row));
            }
        }
    }
    Ok(VerticalComplement {
        blocks,
        elements,
        rank_delta0,
    })
}

/// The graded pieces of the deformation space for `0 <= d <= d_max`, with
/// explicit basis cocycles. The `cy` column is zero here; the divergence
/// kernel fills it.
pub fn deformation_space(
    bundle: &SplitBundle,
    d_max: u32,
    w: Window,
) -> Result<Vec<GradedPiece>> {
    deformation_space_impl(bundle, d_max, w, false)
}

pub(crate) fn deformation_space_impl(
    bundle: &SplitBundle,
    d_max: u32,
    w: Window,
    corrupt: bool,
) -> Result<Vec<GradedPiece>> {
    let mut pieces = Vec::new();
    for d in 0..=d_max {
        let horiz = horizontal_blocks(bundle, d, w)?;
        let complement = vertical_complement_impl(bundle, d, w, corrupt)?;
        let h_vert_raw = complement.blocks.total_dim;
        let rank_delta0 = complement.rank_delta0;
        let h_vert = complement.elements.len();
        debug_assert_eq!(h_vert, h_vert_raw - rank_delta0);

        let mut basis = Vec::new();
        for (j, m, rep, _) in &complement.elements {
            basis.push(DeformationCocycle::with_sigma(*j, m.clone(), rep.clone()));
        }
        for (m, space) in &horiz.components {
            for b in &space.basis {
                basis.push(DeformationCocycle::with_rho(m.clone(), b.clone()));
            }
        }

        pieces.push(GradedPiece {
            d,
            h_horiz: horiz.total_dim,
            h_vert_raw,
            rank_delta0,
            h_vert,
            total: horiz.total_dim + h_vert,
            cy: 0,
            basis,
        });
    }
    Ok(pieces)
}

/// Dimension of the degree-`d` piece of `H^0` of the tangent sheaf of the
/// total space, assembled from the start of the long exact sequence: global
/// vertical fields at fiber degree `d` plus the kernel of the connecting map
/// on global horizontal fields at degree `d`.
pub fn h0_dimension(bundle: &SplitBundle, d: u32, w: Window) -> Result<usize> {
    let vert: usize = (0..bundle.rank())
        .map(|j| {
            multi_indices(bundle.rank(), d)
                .into_iter()
                .map(|m| h0_basis(vert_twist(bundle, j, &m)).dim())
                .sum::<usize>()
        })
        .sum();
    let horiz: usize = h0_graded(bundle, d, w)?
        .iter()
        .map(|(_, s)| s.dim())
        .sum();
    let delta_rank = rank(&connecting_map(bundle, d, w)?);
    Ok(vert + horiz - delta_rank)
}

fn power_text(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

fn zeta_text(c: &DeformationCocycle) -> String {
    let parts: Vec<String> = c
        .rho_terms()
        .map(|(m, p)| {
            let mono = m.monomial_text("w", "b");
            if mono == "1" {
                format!("({})", p.display_with("z_b"))
            } else {
                format!("({})*{}", p.display_with("z_b"), mono)
            }
        })
        .collect();
    parts.join(" + ")
}

fn sigma_text(c: &DeformationCocycle, j: usize) -> String {
    let parts: Vec<String> = c
        .sigma_terms()
        .filter(|((cj, _), _)| *cj == j)
        .map(|((_, m), p)| {
            let mono = m.monomial_text("w", "b");
            if mono == "1" {
                format!("({})", p.display_with("z_b"))
            } else {
                format!("({})*{}", p.display_with("z_b"), mono)
            }
        })
        .collect();
    parts.join(" + ")
}

/// Render a cocycle as deformed transition functions between the two charts.
///
/// The undeformed transitions are `z_a = 1/z_b` and
/// `wj_a = z_b^(-a_j) wj_b`; the horizontal term enters through the Jacobian
/// `-z_b^-2` and couples back into each fiber through the logarithmic
/// derivative `-a_j z_b^-1` of that fiber's transition.
pub fn render_deformation(bundle: &SplitBundle, c: &DeformationCocycle) -> String {
    let mut out = String::new();
    let zeta = zeta_text(c);
    if zeta.is_empty() {
        out.push_str("z_a = 1/z_b\n");
    } else {
        out.push_str(&format!("z_a = 1/z_b + eps*(-z_b^-2)*({zeta})\n"));
    }
    for j in 0..bundle.rank() {
        let a_j = bundle.degree(j);
        let phi = power_text("z_b", -a_j);
        let wj = format!("w{}_b", j + 1);
        let mut inner = wj.clone();
        let sig = sigma_text(c, j);
        if !sig.is_empty() {
            inner.push_str(&format!(" + eps*({sig})"));
        }
        if !zeta.is_empty() && a_j != 0 {
            inner.push_str(&format!(" + eps*({}*z_b^-1)*{}*({})", -a_j, wj, zeta));
        }
        let lhs = format!("w{}_a", j + 1);
        if phi.is_empty() {
            out.push_str(&format!("{lhs} = {inner}\n"));
        } else if inner == wj {
            out.push_str(&format!("{lhs} = {phi}*{wj}\n"));
        } else {
            out.push_str(&format!("{lhs} = {phi}*({inner})\n"));
        }
    }
    out
}
