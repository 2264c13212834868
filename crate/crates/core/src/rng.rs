//! Deterministic, splittable randomness for searches and perturbations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::BinaryForm;
use crate::rat::{int, ratio, Rat};

/// SplitMix64 finalizer, used to derive independent child seeds.
pub fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Generator for sub-task `stream` of `seed`, independent of the others.
    pub fn split(seed: u64, stream: u64) -> Self {
        Self::new(mix(seed, stream))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.gen_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, height: i64) -> i64 {
        loop {
            let v = self.int(-height, height);
            if v != 0 {
                return v;
            }
        }
    }

    /// A rational `n / den` with `|n| <= height`.
    pub fn rat(&mut self, height: i64, den: i64) -> Rat {
        ratio(self.int(-height, height), den)
    }

    /// A degree-`d` form with integer coefficients in `[-height, height]`.
    pub fn form(&mut self, d: usize, height: i64) -> BinaryForm {
        BinaryForm::new((0..=d).map(|_| int(self.int(-height, height))).collect())
    }

    /// A random nonzero form with nonzero extreme coefficients.
    pub fn dense_form(&mut self, d: usize, height: i64) -> BinaryForm {
        let mut f = self.form(d, height);
        let mut c = f.clone().into_coeffs();
        c[0] = int(self.nonzero_int(height));
        c[d] = int(self.nonzero_int(height));
        f = BinaryForm::new(c);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let a: Vec<i64> = (0..5).map(|_| SeededRng::new(3).int(0, 1000)).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut x = SeededRng::split(3, 0);
        let mut y = SeededRng::split(3, 1);
        let xs: Vec<i64> = (0..8).map(|_| x.int(0, 1 << 30)).collect();
        let ys: Vec<i64> = (0..8).map(|_| y.int(0, 1 << 30)).collect();
        assert_ne!(xs, ys);
        assert_ne!(mix(1, 2), mix(2, 1));
    }

    #[test]
    fn dense_forms_have_nonzero_ends() {
        let mut r = SeededRng::new(11);
        for d in 1..6 {
            let f = r.dense_form(d, 3);
            assert!(!f.coeff(0).eq(&int(0)) && !f.coeff(d).eq(&int(0)));
        }
    }
}
