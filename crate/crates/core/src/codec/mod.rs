//! PAC/polar encoding and decoding.
//!
//! Encoding composes three steps: rate-profile insertion (scatter the
//! payload over the non-frozen positions), the convolutional transform
//! `u = v G_c`, and the polar transform `x = u G_p`. Decoding walks the
//! polar recursion with a per-path convolutional shift register; see
//! [`sc_decode`] and [`scl_decode`].

mod crc;
mod sc;
mod scl;

pub use crc::CrcSpec;
pub use sc::{sc_decode, ScDecoder};
pub use scl::{scl_decode, SclDecoder};

use crate::error::{Error, Result};
use crate::gf2::{gf2_matmul, toeplitz_conv_matrix, polar_transform_matrix, BitMatrix, BitVector, ConvPolynomial};
use crate::rate_profile::RateProfile;
use crate::scalar::Real;
use std::sync::OnceLock;

/// A concrete PAC code: dimensions, generator polynomial, rate profile,
/// and optional CRC. The transform matrices are cached on first use.
///
/// Immutable after construction and freely shareable across threads.
#[derive(Debug)]
pub struct PacCode {
    profile: RateProfile,
    generator: ConvPolynomial,
    crc: Option<CrcSpec>,
    stages: u32,
    conv_matrix: OnceLock<BitMatrix>,
    polar_matrix: OnceLock<BitMatrix>,
    generator_matrix: OnceLock<BitMatrix>,
}

impl PacCode {
    pub fn new(
        profile: RateProfile,
        generator: ConvPolynomial,
        crc: Option<CrcSpec>,
    ) -> Result<Self> {
        let n = profile.n();
        if !n.is_power_of_two() {
            return Err(Error::Parameter(format!("block length {n} is not a power of two")));
        }
        if let Some(spec) = &crc {
            if spec.width() >= profile.k() {
                return Err(Error::Parameter(format!(
                    "CRC width {} leaves no payload in k = {}",
                    spec.width(),
                    profile.k()
                )));
            }
        }
        Ok(Self {
            stages: n.trailing_zeros(),
            profile,
            generator,
            crc,
            conv_matrix: OnceLock::new(),
            polar_matrix: OnceLock::new(),
            generator_matrix: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn k(&self) -> usize {
        self.profile.k()
    }

    pub fn stages(&self) -> u32 {
        self.stages
    }

    pub fn profile(&self) -> &RateProfile {
        &self.profile
    }

    pub fn generator(&self) -> &ConvPolynomial {
        &self.generator
    }

    pub fn crc(&self) -> Option<&CrcSpec> {
        self.crc.as_ref()
    }

    /// Number of payload bits per frame: `k`, minus the CRC width when
    /// a CRC is attached.
    pub fn payload_len(&self) -> usize {
        self.k() - self.crc.as_ref().map_or(0, |c| c.width())
    }

    /// The Toeplitz convolution matrix `G_c` (cached).
    pub fn conv_matrix(&self) -> &BitMatrix {
        self.conv_matrix
            .get_or_init(|| toeplitz_conv_matrix(&self.generator, self.n()).expect("n validated"))
    }

    /// The polar transform `G_p = F^{(x)n}` (cached).
    pub fn polar_matrix(&self) -> &BitMatrix {
        self.polar_matrix
            .get_or_init(|| polar_transform_matrix(self.stages).expect("n validated"))
    }

    /// The combined generator `G = G_c G_p` (cached).
    pub fn generator_matrix(&self) -> &BitMatrix {
        self.generator_matrix.get_or_init(|| {
            gf2_matmul(self.conv_matrix(), self.polar_matrix()).expect("dimensions agree")
        })
    }

    /// Full encode: optional CRC append, rate-profile insertion,
    /// convolutional transform, polar transform.
    pub fn encode(&self, payload: &BitVector) -> Result<BitVector> {
        if payload.len() != self.payload_len() {
            return Err(Error::Dimension(format!(
                "payload length {} does not match {}",
                payload.len(),
                self.payload_len()
            )));
        }
        let info = match &self.crc {
            Some(spec) => spec.append(payload),
            None => payload.clone(),
        };
        let v = insert_rate_profile(&info, &self.profile)?;
        let u = conv_encode(&v, &self.generator);
        polar_encode(&u)
    }
}

/// Scatters the `K` payload bits over the non-frozen positions of a
/// length-`N` vector, ascending; frozen positions stay zero.
pub fn insert_rate_profile(payload: &BitVector, profile: &RateProfile) -> Result<BitVector> {
    if payload.len() != profile.k() {
        return Err(Error::Dimension(format!(
            "payload length {} does not match k = {}",
            payload.len(),
            profile.k()
        )));
    }
    let mut v = BitVector::zeros(profile.n());
    for (bit, pos) in payload.iter().zip(profile.non_frozen()) {
        v.set(pos - 1, bit);
    }
    Ok(v)
}

/// Gathers the non-frozen positions back out of `v`.
pub fn extract_payload(v: &BitVector, profile: &RateProfile) -> Result<BitVector> {
    if v.len() != profile.n() {
        return Err(Error::Dimension(format!(
            "vector length {} does not match n = {}",
            v.len(),
            profile.n()
        )));
    }
    let mut payload = BitVector::zeros(profile.k());
    for (slot, pos) in profile.non_frozen().into_iter().enumerate() {
        payload.set(slot, v.get(pos - 1));
    }
    Ok(payload)
}

/// Shift register of the last `m` input bits of the convolutional
/// transform; `reg[t - 1]` holds `v_{i-t}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvState {
    reg: Vec<u8>,
}

impl ConvState {
    pub fn new(memory: usize) -> Self {
        Self {
            reg: vec![0; memory],
        }
    }

    /// The convolution output for input `v` in the current state,
    /// without advancing the register.
    #[inline]
    pub fn output(&self, g: &ConvPolynomial, v: u8) -> u8 {
        let taps = g.coeffs();
        let mut acc = taps[0] & v;
        for (t, &tap) in taps.iter().enumerate().skip(1) {
            acc ^= tap & self.reg[t - 1];
        }
        acc
    }

    /// Shifts `v` into the register. The register advances the same way
    /// on frozen and non-frozen positions.
    #[inline]
    pub fn advance(&mut self, v: u8) {
        if !self.reg.is_empty() {
            self.reg.rotate_right(1);
            self.reg[0] = v;
        }
    }
}

/// Streaming convolutional transform `u = v G_c` with a zero-initialized
/// register.
pub fn conv_encode(v: &BitVector, g: &ConvPolynomial) -> BitVector {
    let mut state = ConvState::new(g.memory());
    let mut u = BitVector::zeros(v.len());
    for (i, bit) in v.iter().enumerate() {
        u.set(i, state.output(g, bit));
        state.advance(bit);
    }
    u
}

/// In-place butterfly network computing `x = u F^{(x)n}`.
pub fn polar_encode(u: &BitVector) -> Result<BitVector> {
    let n = u.len();
    if !n.is_power_of_two() {
        return Err(Error::Dimension(format!("length {n} is not a power of two")));
    }
    let mut x = u.to_bits();
    polar_transform_in_place(&mut x);
    Ok(BitVector::from_bits(&x))
}

/// The same butterfly on a raw bit slice; the transform is an
/// involution.
pub(crate) fn polar_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        let step = half * 2;
        for block in (0..n).step_by(step) {
            for j in 0..half {
                x[block + j] ^= x[block + j + half];
            }
        }
        half = step;
    }
}

/// Result of a decoding attempt.
#[derive(Clone, PartialEq, Debug)]
pub struct DecoderOutput<R> {
    /// Recovered payload (CRC bits stripped when a CRC is in use).
    pub info_bits: BitVector,
    /// Full decision vector; zero on every frozen position.
    pub v_hat: BitVector,
    /// CRC verdict when a CRC is in use, `true` otherwise.
    pub success: bool,
    /// Final path metric (0 for a noiseless successive-cancellation
    /// pass).
    pub path_metric: R,
}

impl<R: Real> DecoderOutput<R> {
    pub(crate) fn from_vhat(vhat: Vec<u8>, code: &PacCode, path_metric: R) -> Self {
        let v_hat = BitVector::from_bits(&vhat);
        let decided = extract_payload(&v_hat, code.profile()).expect("lengths agree");
        let (info_bits, success) = match code.crc() {
            Some(spec) => {
                let ok = spec.check(&decided);
                let mut info = BitVector::zeros(code.payload_len());
                for i in 0..code.payload_len() {
                    info.set(i, decided.get(i));
                }
                (info, ok)
            }
            None => (decided, true),
        };
        Self {
            info_bits,
            v_hat,
            success,
            path_metric,
        }
    }
}

// Numeric pieces shared by the decoders.

/// Magnitudes at or above this are combined with the min-sum rule,
/// which is exact in that regime (and exactly right for the hard
/// BEC sentinel values).
pub(crate) const F_EXACT_CAP: f64 = 37.0;

/// Check-node LLR combination.
#[inline]
pub(crate) fn f_node<R: Real>(a: R, b: R, min_sum: bool) -> R {
    let cap = R::from_f64_lossy(F_EXACT_CAP);
    if min_sum || a.abs() >= cap || b.abs() >= cap {
        let mag = a.abs().min(b.abs());
        if (a < R::zero()) ^ (b < R::zero()) {
            -mag
        } else {
            mag
        }
    } else {
        let two = R::from_f64_lossy(2.0);
        two * ((a / two).tanh() * (b / two).tanh()).atanh()
    }
}

/// Variable-node LLR combination under the partial sum `u`.
#[inline]
pub(crate) fn g_node<R: Real>(a: R, b: R, u: u8) -> R {
    if u & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

/// Numerically stable `ln(1 + e^x)`.
#[inline]
pub(crate) fn log1pexp<R: Real>(x: R) -> R {
    if x > R::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Path-metric penalty for deciding bit `u` against LLR `l`:
/// `ln(1 + exp(-(1 - 2u) l))`.
#[inline]
pub(crate) fn path_penalty<R: Real>(l: R, u: u8) -> R {
    if u & 1 == 0 {
        log1pexp(-l)
    } else {
        log1pexp(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::gf2_vecmat;
    use crate::rate_profile::rm_design;
    use rand::{Rng, SeedableRng};

    fn profile_8_4() -> RateProfile {
        rm_design(8, 4).unwrap()
    }

    #[test]
    fn insert_places_payload_ascending() {
        let p = profile_8_4();
        let v = insert_rate_profile(&BitVector::from_bits(&[1, 0, 1, 1]), &p).unwrap();
        assert_eq!(v.to_bits(), vec![0, 0, 0, 1, 0, 0, 1, 1]);
        assert!(insert_rate_profile(&BitVector::zeros(3), &p).is_err());
    }

    #[test]
    fn insert_extract_round_trip() {
        let p = profile_8_4();
        let payload = BitVector::from_bits(&[1, 1, 0, 1]);
        let v = insert_rate_profile(&payload, &p).unwrap();
        assert_eq!(extract_payload(&v, &p).unwrap(), payload);

        let zero = BitVector::zeros(4);
        assert!(insert_rate_profile(&zero, &p).unwrap().is_zero());
    }

    #[test]
    fn conv_encode_identity_and_hand_case() {
        let id = ConvPolynomial::parse_octal("1").unwrap();
        let v = BitVector::from_bits(&[1, 0, 1, 1]);
        assert_eq!(conv_encode(&v, &id), v);

        let g = ConvPolynomial::new(vec![1, 1]).unwrap();
        let v = BitVector::from_bits(&[1, 0, 0, 1]);
        assert_eq!(conv_encode(&v, &g).to_bits(), vec![1, 1, 0, 1]);
    }

    #[test]
    fn conv_encode_matches_matrix_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for text in ["133", "177", "7"] {
            let g = ConvPolynomial::parse_octal(text).unwrap();
            let mat = toeplitz_conv_matrix(&g, 64).unwrap();
            for _ in 0..1000 {
                let bits: Vec<u8> = (0..64).map(|_| rng.gen_range(0..2u8)).collect();
                let v = BitVector::from_bits(&bits);
                assert_eq!(conv_encode(&v, &g), gf2_vecmat(&v, &mat).unwrap());
            }
        }
    }

    #[test]
    fn polar_encode_rows_and_involution() {
        assert_eq!(
            polar_encode(&BitVector::from_bits(&[1, 0])).unwrap().to_bits(),
            vec![1, 0]
        );
        assert_eq!(
            polar_encode(&BitVector::from_bits(&[0, 1])).unwrap().to_bits(),
            vec![1, 1]
        );
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for n in [2usize, 8, 64, 256] {
            let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            let u = BitVector::from_bits(&bits);
            let x = polar_encode(&u).unwrap();
            assert_eq!(polar_encode(&x).unwrap(), u);
        }
        assert!(polar_encode(&BitVector::zeros(6)).is_err());
    }

    #[test]
    fn butterfly_matches_matrix_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for stages in [1u32, 3, 6, 10] {
            let n = 1usize << stages;
            let pm = polar_transform_matrix(stages).unwrap();
            let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            let u = BitVector::from_bits(&bits);
            assert_eq!(polar_encode(&u).unwrap(), gf2_vecmat(&u, &pm).unwrap());
        }
    }

    #[test]
    fn pac_encode_equals_generator_matrix_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for (n, k, text) in [(8usize, 4usize, "7"), (16, 8, "133"), (64, 48, "177")] {
            let profile = rm_design(n, k).unwrap();
            let code = PacCode::new(
                profile.clone(),
                ConvPolynomial::parse_octal(text).unwrap(),
                None,
            )
            .unwrap();
            for _ in 0..50 {
                let bits: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2u8)).collect();
                let payload = BitVector::from_bits(&bits);
                let x = code.encode(&payload).unwrap();
                let v = insert_rate_profile(&payload, &profile).unwrap();
                assert_eq!(x, gf2_vecmat(&v, code.generator_matrix()).unwrap());
            }
        }
    }

    #[test]
    fn pac_encode_is_linear_in_v() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let profile = rm_design(16, 8).unwrap();
        let g = ConvPolynomial::parse_octal("133").unwrap();
        let code = PacCode::new(profile, g, None).unwrap();
        assert!(code
            .encode(&BitVector::zeros(8))
            .unwrap()
            .is_zero());
        for _ in 0..20 {
            let a: Vec<u8> = (0..8).map(|_| rng.gen_range(0..2u8)).collect();
            let b: Vec<u8> = (0..8).map(|_| rng.gen_range(0..2u8)).collect();
            let xor: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let mut ea = code.encode(&BitVector::from_bits(&a)).unwrap();
            let eb = code.encode(&BitVector::from_bits(&b)).unwrap();
            ea.xor_assign(&eb);
            assert_eq!(ea, code.encode(&BitVector::from_bits(&xor)).unwrap());
        }
    }

    /// The (8,4) PAC codebook with g=[1,1,1] has minimum distance at
    /// least that of the polar code with the same profile.
    #[test]
    fn small_codebook_distance_dominates_polar() {
        let profile = rm_design(8, 4).unwrap();
        let pac = PacCode::new(profile.clone(), ConvPolynomial::parse_octal("7").unwrap(), None).unwrap();
        let polar = PacCode::new(profile, ConvPolynomial::parse_octal("1").unwrap(), None).unwrap();
        let min_distance = |code: &PacCode| -> usize {
            let mut best = usize::MAX;
            for w in 1u32..16 {
                let bits: Vec<u8> = (0..4).map(|i| ((w >> i) & 1) as u8).collect();
                let x = code.encode(&BitVector::from_bits(&bits)).unwrap();
                best = best.min(x.count_ones());
            }
            best
        };
        assert!(min_distance(&pac) >= min_distance(&polar));
    }

    #[test]
    fn conv_state_advances_uniformly() {
        let g = ConvPolynomial::parse_octal("7").unwrap();
        let mut s = ConvState::new(g.memory());
        assert_eq!(s.output(&g, 1), 1);
        s.advance(1);
        assert_eq!(s.output(&g, 0), 1);
        s.advance(0);
        assert_eq!(s.output(&g, 0), 1);
        s.advance(0);
        assert_eq!(s.output(&g, 0), 0);
    }

    #[test]
    fn code_validates_construction() {
        let profile = rm_design(8, 4).unwrap();
        let g = ConvPolynomial::parse_octal("7").unwrap();
        assert!(PacCode::new(profile.clone(), g.clone(), Some(CrcSpec::crc8_koopman_a6())).is_err());
        let bad = RateProfile::new(6, 3, [1, 2, 3]).unwrap();
        assert!(PacCode::new(bad, g, None).is_err());
    }

    #[test]
    fn cached_generator_matrix_is_product() {
        let profile = rm_design(16, 8).unwrap();
        let g = ConvPolynomial::parse_octal("133").unwrap();
        let code = PacCode::new(profile, g, None).unwrap();
        let expected = gf2_matmul(code.conv_matrix(), code.polar_matrix()).unwrap();
        assert_eq!(code.generator_matrix(), &expected);
    }
}
