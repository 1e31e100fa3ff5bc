//! Quintic particle shape.
//!
//! The shape is the centered cardinal B-spline of degree 5 (support of six
//! cells). A particle at `u = i0 + s` in cell units touches nodes
//! `i0 - 2 ..= i0 + 3`; node `i0 - 2 + m` receives `M5(s + 2 - m)`.

use crate::error::{Error, Result};

/// Number of nodes touched per axis.
pub const STENCIL: usize = 6;

/// Offset of the first stencil node relative to the particle's cell.
pub const STENCIL_SHIFT: isize = -2;

/// Stencil weights for a fractional offset `s` in `[0, 1)`.
pub fn bspline_weights(s: f64) -> Result<[f64; STENCIL]> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::OutOfRange(format!("spline offset {s} not in [0, 1)")));
    }
    Ok(weights_unchecked(s))
}

/// Horner evaluation of the six polynomial pieces; caller guarantees `0 <= s < 1`.
#[inline(always)]
pub(crate) fn weights_unchecked(s: f64) -> [f64; STENCIL] {
    const SCALE: f64 = 1.0 / 120.0;
    let t = 1.0 - s;
    let s2 = s * s;
    let t2 = t * t;
    [
        SCALE * t2 * t2 * t,
        SCALE * (((((5.0 * s - 20.0) * s + 20.0) * s + 20.0) * s - 50.0) * s + 26.0),
        SCALE * ((((-10.0 * s + 30.0) * s) * s - 60.0) * s2 + 66.0),
        SCALE * (((((10.0 * s - 20.0) * s - 20.0) * s + 20.0) * s + 50.0) * s + 26.0),
        SCALE * (((((-5.0 * s + 5.0) * s + 10.0) * s + 10.0) * s + 5.0) * s + 1.0),
        SCALE * s2 * s2 * s,
    ]
}

/// Cell index and stencil weights along one periodic axis of `n` cells.
///
/// `u` is the coordinate in cell units measured from the first node; it must
/// lie in `[0, n]` (the upper end only through rounding).
#[inline(always)]
pub(crate) fn axis_stencil(u: f64, n: usize) -> ([usize; STENCIL], [f64; STENCIL]) {
    let fl = u.floor();
    let mut s = u - fl;
    if s >= 1.0 {
        s = 0.0;
    }
    let i0 = fl as isize;
    let n_i = n as isize;
    let mut idx = [0usize; STENCIL];
    let mut k = (i0 + STENCIL_SHIFT).rem_euclid(n_i) as usize;
    for slot in idx.iter_mut() {
        *slot = k;
        k += 1;
        if k == n {
            k = 0;
        }
    }
    (idx, weights_unchecked(s))
}
