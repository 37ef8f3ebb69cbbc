//! Cyclic redundancy checks over GF(2).
//!
//! Bits are processed MSB-first with a zero initial remainder, no
//! reflection, and no final XOR. The default CRC-8 uses the polynomial
//! written 0xA6 in implicit-+1 (Koopman) notation, i.e.
//! `g(x) = x^8 + x^6 + x^3 + x^2 + 1`.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A CRC generator polynomial of degree `width`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrcSpec {
    width: usize,
    /// Coefficients `x^width ..= x^0`, leading term included.
    taps: Vec<u8>,
    name: String,
}

impl CrcSpec {
    /// Builds a spec from the full coefficient list `x^width ..= x^0`.
    pub fn new(taps: Vec<u8>, name: impl Into<String>) -> Result<Self> {
        if taps.len() < 2 {
            return Err(Error::Parameter("CRC polynomial needs degree >= 1".into()));
        }
        if taps.iter().any(|&t| t > 1) {
            return Err(Error::Parameter("CRC coefficients must be 0 or 1".into()));
        }
        if taps[0] != 1 {
            return Err(Error::Parameter("CRC leading coefficient must be 1".into()));
        }
        Ok(Self {
            width: taps.len() - 1,
            taps,
            name: name.into(),
        })
    }

    /// Builds a spec from implicit-+1 (Koopman) notation: bit
    /// `width - 1 - j` of `value` is the coefficient of `x^(width - j)`,
    /// and the constant term is implicit.
    pub fn from_koopman(width: usize, value: u64, name: impl Into<String>) -> Result<Self> {
        if width == 0 || width > 63 {
            return Err(Error::Parameter(format!("CRC width {width} out of range")));
        }
        if value >> (width - 1) != 1 {
            return Err(Error::Parameter(format!(
                "Koopman value {value:#x} does not have degree {width}"
            )));
        }
        let mut taps = Vec::with_capacity(width + 1);
        for j in (0..width).rev() {
            taps.push(((value >> j) & 1) as u8);
        }
        taps.push(1);
        Self::new(taps, name)
    }

    /// The default CRC-8: Koopman 0xA6,
    /// `g(x) = x^8 + x^6 + x^3 + x^2 + 1`.
    pub fn crc8_koopman_a6() -> Self {
        Self::from_koopman(8, 0xA6, "crc8-koopman-0xa6").expect("constant is valid")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Human-readable convention string, recorded in output metadata.
    pub fn convention(&self) -> String {
        format!(
            "{} msb-first zero-init no-reflect no-xorout",
            self.name
        )
    }

    /// Remainder of `message(x) * x^width` modulo the generator,
    /// computed with a shift register.
    pub fn remainder(&self, bits: impl Iterator<Item = u8>) -> Vec<u8> {
        let mut reg = vec![0u8; self.width];
        for b in bits {
            let feedback = reg[0] ^ (b & 1);
            reg.rotate_left(1);
            reg[self.width - 1] = 0;
            if feedback == 1 {
                for (r, &t) in reg.iter_mut().zip(&self.taps[1..]) {
                    *r ^= t;
                }
            }
        }
        reg
    }

    /// Appends the `width` remainder bits to the payload.
    pub fn append(&self, payload: &BitVector) -> BitVector {
        let rem = self.remainder(payload.iter());
        let mut out = BitVector::zeros(payload.len() + self.width);
        for (i, b) in payload.iter().enumerate() {
            out.set(i, b);
        }
        for (i, &b) in rem.iter().enumerate() {
            out.set(payload.len() + i, b);
        }
        out
    }

    /// Verifies that `bits` (payload plus appended CRC) leaves a zero
    /// remainder.
    pub fn check(&self, bits: &BitVector) -> bool {
        if bits.len() < self.width {
            return false;
        }
        self.remainder(bits.iter()).iter().all(|&b| b == 0)
    }
}
