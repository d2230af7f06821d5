//! Error type shared by the whole crate.

/// Errors raised by cohomology and deformation computations.
///
/// Window errors are hard failures on purpose: a too-small exponent window
/// would silently corrupt ranks, so every operation that could truncate
/// refuses to instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The requested exponent window cannot hold the cochain spaces needed
    /// for the given twist degree.
    #[error("window [{lo},{hi}] too small for twist degree {degree}")]
    WindowTooSmall { lo: i64, hi: i64, degree: i64 },

    /// An arithmetic operation produced a term outside the working window.
    #[error("exponent {exponent} escapes window [{lo},{hi}]")]
    WindowOverflow { exponent: i64, lo: i64, hi: i64 },

    /// A reported dimension changed when the window was enlarged.
    #[error("unstable at half-widths {w} vs {w_checked}: {context}")]
    Unstable {
        w: i64,
        w_checked: i64,
        context: String,
    },

    /// The operation is only defined for bundles with degree sum -2.
    #[error("bundle {0:?} is not Calabi-Yau (degree sum is not -2)")]
    NotCalabiYau(Vec<i64>),
}

pub type Result<T> = std::result::Result<T, Error>;
