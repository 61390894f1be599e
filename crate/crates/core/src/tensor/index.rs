//! Row-major multi-index helpers. Everything here is 0-based; the public
//! tensor API converts from the 1-based convention at the boundary.

use crate::error::{Error, Result};

/// `dim^order`, or `None` on overflow.
pub fn checked_len(order: usize, dim: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..order {
        len = len.checked_mul(dim)?;
    }
    Some(len)
}

/// `dim^order` as `u128`, saturating, for budget diagnostics.
pub fn wide_len(order: usize, dim: usize) -> u128 {
    let mut len: u128 = 1;
    for _ in 0..order {
        len = len.saturating_mul(dim as u128);
    }
    len
}

/// Flat row-major offset of a 0-based index tuple (last index fastest).
#[inline]
pub fn flat(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &j| acc * dim + j)
}

/// Inverse of [`flat`].
pub fn unflat(mut offset: usize, order: usize, dim: usize, out: &mut [usize]) {
    debug_assert_eq!(out.len(), order);
    for slot in out.iter_mut().rev() {
        *slot = offset % dim;
        offset /= dim;
    }
}

/// Advances `idx` to the next tuple in row-major order. Returns `false`
/// once all tuples have been visited (and leaves `idx` at all zeros).
#[inline]
pub fn advance(idx: &mut [usize], dim: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Calls `f` on every 0-based index tuple of the given order, row-major.
pub fn for_each_index(order: usize, dim: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; order];
    loop {
        f(&idx);
        if !advance(&mut idx, dim) {
            break;
        }
    }
}

/// Converts a 1-based index tuple to 0-based, validating range and length.
pub fn to_zero_based(idx: &[usize], order: usize, dim: usize) -> Result<Vec<usize>> {
    if idx.len() != order {
        return Err(Error::DimensionMismatch {
            expected: order,
            got: idx.len(),
        });
    }
    if idx.iter().any(|&j| j == 0 || j > dim) {
        return Err(Error::IndexOutOfRange {
            index: idx.to_vec(),
            dim,
        });
    }
    Ok(idx.iter().map(|&j| j - 1).collect())
}
