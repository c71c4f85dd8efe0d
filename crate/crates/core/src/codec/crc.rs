use crate::error::{domain, Result};

/// A non-reflected, zero-initialized CRC appended after the payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crc {
    width: u32,
    /// Generator without the leading `x^width` term.
    poly: u64,
}

impl Crc {
    /// No CRC: attach is the identity and every word checks.
    pub const NONE: Self = Self { width: 0, poly: 0 };

    /// `x^19 + x^5 + x^2 + x + 1`.
    pub const CRC19: Self = Self {
        width: 19,
        poly: 0x0027,
    };

    /// The built-in generator of the given width.
    pub fn new(width: u32) -> Result<Self> {
        let poly = match width {
            0 => return Ok(Self::NONE),
            6 => 0x21,
            8 => 0x07,
            11 => 0x621,
            16 => 0x1021,
            19 => return Ok(Self::CRC19),
            24 => 0x86_4CFB,
            _ => return domain(format!("no built-in CRC of width {width}")),
        };
        Ok(Self { width, poly })
    }

    /// A custom generator given with its leading term, e.g. `0x80027`.
    pub fn with_generator(width: u32, generator: u64) -> Result<Self> {
        if width == 0 || width > 63 {
            return domain(format!("CRC width {width} outside 1..=63"));
        }
        if generator >> width != 1 {
            return domain(format!("generator {generator:#x} does not have degree {width}"));
        }
        Ok(Self {
            width,
            poly: generator & ((1 << width) - 1),
        })
    }

    pub fn width(self) -> u32 {
        self.width
    }

    /// The full generator including `x^width`.
    pub fn generator(self) -> u64 {
        if self.width == 0 {
            0
        } else {
            1 << self.width | self.poly
        }
    }

    /// Remainder of `bits · x^width` modulo the generator.
    pub fn remainder(self, bits: &[u8]) -> u64 {
        if self.width == 0 {
            return 0;
        }
        let top = self.width - 1;
        let mask = (1u64 << self.width) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = (reg >> top & 1) ^ u64::from(b & 1);
            reg = reg << 1 & mask;
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// `info` followed by its CRC, most significant bit first.
    pub fn attach(self, info: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(info.len() + self.width as usize);
        out.extend_from_slice(info);
        let rem = self.remainder(info);
        out.extend((0..self.width).rev().map(|i| (rem >> i & 1) as u8));
        out
    }

    /// Whether the trailing `width` bits are the CRC of the rest.
    pub fn check(self, word: &[u8]) -> bool {
        let w = self.width as usize;
        if w == 0 {
            return true;
        }
        if word.len() < w {
            return false;
        }
        let (info, tail) = word.split_at(word.len() - w);
        let rem = self.remainder(info);
        tail.iter()
            .enumerate()
            .all(|(i, &b)| u64::from(b) == rem >> (w - 1 - i) & 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generator_value() {
        assert_eq!(Crc::CRC19.generator(), 0x80027);
        assert_eq!(Crc::with_generator(19, 0x80027).unwrap(), Crc::CRC19);
        assert!(Crc::with_generator(19, 0x27).is_err());
        assert!(Crc::new(7).is_err());
    }

    #[test]
    fn attach_then_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let len = rng.random_range(1..200);
            let info: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
            let word = Crc::CRC19.attach(&info);
            assert_eq!(word.len(), len + 19);
            assert_eq!(&word[..len], &info[..]);
            assert!(Crc::CRC19.check(&word));
        }
    }

    #[test]
    fn single_flips_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let info: Vec<u8> = (0..64).map(|_| rng.random_range(0..2)).collect();
            let word = Crc::CRC19.attach(&info);
            for i in 0..word.len() {
                let mut bad = word.clone();
                bad[i] ^= 1;
                assert!(!Crc::CRC19.check(&bad), "flip at {i} undetected");
            }
        }
    }

    #[test]
    fn empty_crc_is_identity() {
        let info = vec![1, 0, 1, 1];
        assert_eq!(Crc::NONE.attach(&info), info);
        assert!(Crc::NONE.check(&[0, 1]));
        assert!(Crc::new(0).unwrap().check(&[]));
    }

    #[test]
    fn known_remainder() {
        // x^0 alone: remainder of x^19 is the generator tail
        assert_eq!(Crc::CRC19.remainder(&[1]), 0x27);
        assert_eq!(Crc::CRC19.remainder(&[0, 0, 0]), 0);
    }
}
