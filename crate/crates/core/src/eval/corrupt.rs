//! Random dot flips on encoded words.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braille::{beta, decode_cells, CodeTable};

use super::EvalError;

/// Attempts at drawing a flip set before giving up.
pub const MAX_REDRAWS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corruption {
    pub word: String,
    /// Number of flipped bits.
    pub flips: usize,
    /// Flip sets rejected because a cell became unmapped.
    pub redraws: usize,
}

/// `round(percent / 100 * bits)`, halves rounded away from zero.
pub fn flip_count(percent: f64, bits: usize) -> usize {
    (percent * bits as f64 / 100.0).round() as usize
}

/// Flips `k` distinct dot positions of `word`, chosen uniformly, redrawing
/// the whole set whenever a resulting cell has no character.
pub fn inject_bit_errors<R: Rng + ?Sized>(
    word: &str,
    percent: f64,
    rng: &mut R,
    table: &CodeTable,
) -> Result<Corruption, EvalError> {
    if !(percent > 0.0 && percent <= 100.0) {
        return Err(EvalError::InvalidPercent(percent));
    }
    let original = beta(word, table)?;
    let bits = original.len();
    let k = flip_count(percent, bits);
    if k == 0 {
        return Ok(Corruption {
            word: word.to_string(),
            flips: 0,
            redraws: 0,
        });
    }
    for redraws in 0..MAX_REDRAWS {
        let mut vector = original.clone();
        for position in sample(rng, bits, k) {
            vector.flip(position);
        }
        if let Ok(corrupted) = decode_cells(vector.cells(), table) {
            return Ok(Corruption {
                word: corrupted,
                flips: k,
                redraws,
            });
        }
    }
    Err(EvalError::CorruptionInfeasible {
        word: word.to_string(),
        percent,
    })
}

/// Independent generator for one token of one text under one condition, so
/// results do not depend on processing order.
pub fn token_rng(seed: u64, condition: u64, text: usize, token: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ condition.rotate_left(32));
    rng.set_stream(((text as u64) << 32) | token as u64);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braille::BitVector;
    use proptest::prelude::*;
    use rand::RngCore;

    fn table() -> CodeTable {
        CodeTable::portuguese()
    }

    fn dot_distance(a: &str, b: &str) -> u32 {
        let t = table();
        beta(a, &t).unwrap().hamming(&beta(b, &t).unwrap()).unwrap()
    }

    #[test]
    fn ten_percent_of_sixty_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = inject_bit_errors("computação", 10.0, &mut rng, &table()).unwrap();
        assert_eq!(c.flips, 6);
        assert_eq!(c.word.chars().count(), 10);
        if c.redraws == 0 {
            assert_eq!(dot_distance("computação", &c.word), 6);
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(flip_count(10.0, 60), 6);
        // 1% of 6 bits is 0.06
        assert_eq!(flip_count(1.0, 6), 0);
        assert_eq!(flip_count(2.5, 60), 2);
        assert_eq!(flip_count(25.0, 6), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = inject_bit_errors("a", 1.0, &mut rng, &table()).unwrap();
        assert_eq!((c.word.as_str(), c.flips), ("a", 0));
    }

    #[test]
    fn determinism() {
        let run = || {
            let mut rng = token_rng(42, 1, 2, 3);
            inject_bit_errors("braille", 20.0, &mut rng, &table()).unwrap()
        };
        assert_eq!(run(), run());
        assert_ne!(token_rng(42, 1, 2, 3).next_u64(), token_rng(42, 1, 2, 4).next_u64());
        assert_ne!(token_rng(42, 1, 2, 3).next_u64(), token_rng(42, 2, 2, 3).next_u64());
    }

    #[test]
    fn bad_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            inject_bit_errors("casa", 0.0, &mut rng, &table()),
            Err(EvalError::InvalidPercent(_))
        ));
        assert!(matches!(
            inject_bit_errors("casa", 120.0, &mut rng, &table()),
            Err(EvalError::InvalidPercent(_))
        ));
        assert!(matches!(inject_bit_errors("c4sa", 10.0, &mut rng, &table()), Err(EvalError::Braille(_))));
    }

    #[test]
    fn full_flip_of_space_is_infeasible_only_when_no_cell_decodes() {
        // flipping all six dots of 'a' gives dots 2-3-4-5-6, which is 'ú'
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = inject_bit_errors("a", 100.0, &mut rng, &table()).unwrap();
        assert_eq!(c.word, "ú");
        // dots 1-2-3-5-6 are 'á'; its complement (dot 4 only) is unmapped
        assert!(matches!(
            inject_bit_errors("á", 100.0, &mut rng, &table()),
            Err(EvalError::CorruptionInfeasible { .. })
        ));
    }

    proptest! {
        #[test]
        fn exact_flip_accounting(word in "[a-zçãéíóú]{1,12}", percent in 0.5f64..=100.0, seed: u64) {
            let t = table();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match inject_bit_errors(&word, percent, &mut rng, &t) {
                Ok(c) => {
                    prop_assert_eq!(c.flips, flip_count(percent, 6 * word.chars().count()));
                    prop_assert_eq!(c.word.chars().count(), word.chars().count());
                    let corrupted = beta(&c.word, &t).unwrap();
                    let original: BitVector = beta(&word, &t).unwrap();
                    prop_assert_eq!(original.hamming(&corrupted).unwrap() as usize, c.flips);
                }
                Err(EvalError::CorruptionInfeasible { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
