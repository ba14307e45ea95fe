//! Classical bit helpers shared across the protocol and analysis layers.

use alloc::vec::Vec;
use rand::Rng;

/// A classical bit, always 0 or 1.
pub type Bit = u8;

/// XOR of two equal-length bit strings.
///
/// # Panics
///
/// Panics if the lengths differ.
pub fn xor(a: &[Bit], b: &[Bit]) -> Vec<Bit> {
    assert_eq!(a.len(), b.len(), "bit strings must have equal length");
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Samples `len` independent uniform bits.
pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Bit> {
    (0..len).map(|_| rng.random::<bool>() as Bit).collect()
}

/// Samples a bit string of length `len` with exactly `zeros` zero bits, the
/// arrangement uniform over all such strings (Fisher–Yates on a template).
pub fn balanced_bits<R: Rng + ?Sized>(rng: &mut R, len: usize, zeros: usize) -> Vec<Bit> {
    assert!(zeros <= len, "cannot place {zeros} zeros in {len} bits");
    let mut bits: Vec<Bit> = (0..len).map(|i| (i >= zeros) as Bit).collect();
    for i in (1..bits.len()).rev() {
        let j = rng.random_range(0..=i);
        bits.swap(i, j);
    }
    bits
}

/// Number of positions where two equal-length bit strings agree.
pub fn agreements(a: &[Bit], b: &[Bit]) -> usize {
    assert_eq!(a.len(), b.len(), "bit strings must have equal length");
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn xor_is_bitwise() {
        assert_eq!(xor(&[0, 1, 0, 1], &[0, 0, 1, 1]), [0, 1, 1, 0]);
    }

    #[test]
    fn balanced_bits_have_requested_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in [2usize, 8, 64] {
            let bits = balanced_bits(&mut rng, len, len / 2);
            assert_eq!(bits.iter().filter(|&&b| b == 0).count(), len / 2);
        }
    }

    #[test]
    fn balanced_bits_arrangements_are_uniformish() {
        // All C(4,2) = 6 arrangements of two zeros in four bits should appear.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [false; 16];
        for _ in 0..200 {
            let bits = balanced_bits(&mut rng, 4, 2);
            let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            seen[idx] = true;
        }
        assert_eq!(seen.iter().filter(|&&s| s).count(), 6);
    }
}
