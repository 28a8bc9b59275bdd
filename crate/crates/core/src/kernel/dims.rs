use serde::{Deserialize, Serialize};

use super::KernelError;

/// Dimensions of a Cauchy problem: `s = dim S`, `m = rank D`, `c` the corank.
///
/// The ambient space is `R^(m + c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub s: usize,
    pub m: usize,
    pub c: usize,
}

impl Dims {
    pub fn new(s: usize, m: usize, c: usize) -> Result<Self, KernelError> {
        if s == 0 || s >= m || c == 0 {
            return Err(KernelError::InvalidDims { s, m, c });
        }
        Ok(Self { s, m, c })
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.m + self.c
    }

    /// Number of ruling directions, `m - s`.
    #[inline]
    pub fn fiber(&self) -> usize {
        self.m - self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_triples() {
        assert!(Dims::new(1, 2, 1).is_ok());
        assert!(Dims::new(0, 2, 1).is_err());
        assert!(Dims::new(2, 2, 1).is_err());
        assert!(Dims::new(3, 2, 1).is_err());
        assert!(Dims::new(1, 2, 0).is_err());
        let d = Dims::new(2, 5, 3).unwrap();
        assert_eq!(d.ambient(), 8);
        assert_eq!(d.fiber(), 3);
    }
}
