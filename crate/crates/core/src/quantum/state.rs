// Copyright 2026 The qexam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::density::DensityMatrix2;
use crate::error::{invalid, Result};

/// Amplitudes with modulus below this are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance used for normalization checks and state comparisons.
pub const TOLERANCE: f64 = 1e-12;

/// Measurement basis: computational (`Z`) or Hadamard (`X`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
        })
    }
}

/// An X-basis eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Sign {
        if rng.random::<bool>() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    fn factor(self) -> f64 {
        self.value() as f64
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Result of a single-qubit measurement: a bit for `Z`, a sign for `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasurementOutcome {
    Z(bool),
    X(Sign),
}

impl MeasurementOutcome {
    pub fn basis(self) -> Basis {
        match self {
            MeasurementOutcome::Z(_) => Basis::Z,
            MeasurementOutcome::X(_) => Basis::X,
        }
    }

    /// The two possible outcomes of measuring in `basis`.
    pub fn both(basis: Basis) -> [MeasurementOutcome; 2] {
        match basis {
            Basis::Z => [MeasurementOutcome::Z(false), MeasurementOutcome::Z(true)],
            Basis::X => [
                MeasurementOutcome::X(Sign::Plus),
                MeasurementOutcome::X(Sign::Minus),
            ],
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            MeasurementOutcome::Z(b) => Some(b),
            MeasurementOutcome::X(_) => None,
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            MeasurementOutcome::X(s) => Some(s),
            MeasurementOutcome::Z(_) => None,
        }
    }
}

impl fmt::Display for MeasurementOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementOutcome::Z(b) => write!(f, "{}", *b as u8),
            MeasurementOutcome::X(s) => write!(f, "{s}"),
        }
    }
}

/// A normalized pure state stored as a sparse map from basis strings to
/// amplitudes.
///
/// Qubit 0 is the leftmost symbol of every basis string. Operations never
/// mutate their receiver; each returns a fresh state.
#[derive(Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    terms: BTreeMap<BitString, Complex64>,
}

impl PureState {
    /// Builds a state from explicit terms. Terms on the same basis string are
    /// summed; the result must be normalized within [`TOLERANCE`].
    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, Complex64)>,
    {
        let mut map: BTreeMap<BitString, Complex64> = BTreeMap::new();
        for (bits, amp) in terms {
            if bits.len() != num_qubits {
                return Err(invalid(format!(
                    "basis string {bits} has length {}, expected {num_qubits}",
                    bits.len()
                )));
            }
            *map.entry(bits).or_default() += amp;
        }
        let state = PureState {
            num_qubits,
            terms: map,
        }
        .pruned();
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(invalid(format!("state is not normalized: norm² = {norm}")));
        }
        Ok(state)
    }

    /// The basis state `|bits>`.
    pub fn basis_state(bits: BitString) -> Self {
        let mut terms = BTreeMap::new();
        let num_qubits = bits.len();
        terms.insert(bits, Complex64::new(1.0, 0.0));
        PureState { num_qubits, terms }
    }

    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: usize) -> Self {
        Self::basis_state(BitString::zeros(n))
    }

    /// The carrier state `(|0 s> + |1 s̄>)/√2` over `s.len() + 1` qubits.
    /// Qubit 0 is the holder's qubit, qubit `n` belongs to party `n`.
    pub fn phi(s: &[bool]) -> Result<Self> {
        if s.is_empty() {
            return Err(invalid("carrier state needs at least one secret bit"));
        }
        let mut low = BitString::zeros(s.len() + 1);
        let mut high = BitString::zeros(s.len() + 1);
        high.set(0, true);
        for (n, &bit) in s.iter().enumerate() {
            low.set(n + 1, bit);
            high.set(n + 1, !bit);
        }
        let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut terms = BTreeMap::new();
        terms.insert(low, amp);
        terms.insert(high, amp);
        Ok(PureState {
            num_qubits: s.len() + 1,
            terms,
        })
    }

    /// Single-qubit `|+>` or `|->`.
    pub fn decoy(sign: Sign) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            BitString::from_bits(&[false]),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        );
        terms.insert(
            BitString::from_bits(&[true]),
            Complex64::new(sign.factor() * FRAC_1_SQRT_2, 0.0),
        );
        PureState {
            num_qubits: 1,
            terms,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BitString, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, bits: &BitString) -> Complex64 {
        self.terms.get(bits).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(invalid(format!(
                "qubit {q} out of range for a {}-qubit state",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        self
    }

    /// Tensor product `self ⊗ other`; `other`'s qubits follow `self`'s.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut terms = BTreeMap::new();
        for (a_bits, a_amp) in &self.terms {
            for (b_bits, b_amp) in &other.terms {
                terms.insert(a_bits.concat(b_bits), a_amp * b_amp);
            }
        }
        PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            terms,
        }
        .pruned()
    }

    /// Controlled-NOT: flips `target` on every term whose `control` bit is 1.
    pub fn cnot(&self, control: usize, target: usize) -> Result<PureState> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(invalid("CNOT control and target must differ"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(bits, &amp)| {
                let mut bits = bits.clone();
                if bits.get(control) {
                    bits.flip(target);
                }
                (bits, amp)
            })
            .collect();
        Ok(PureState {
            num_qubits: self.num_qubits,
            terms,
        }
        .pruned())
    }

    /// Groups terms by the basis string of all qubits except `q`, giving the
    /// pair of amplitudes for `q = 0` and `q = 1`.
    fn split_on(&self, q: usize) -> BTreeMap<BitString, [Complex64; 2]> {
        let mut groups: BTreeMap<BitString, [Complex64; 2]> = BTreeMap::new();
        for (bits, &amp) in &self.terms {
            let (b, rest) = bits.remove(q);
            groups.entry(rest).or_default()[b as usize] += amp;
        }
        groups
    }

    /// Amplitudes of the rest of the system conditioned on `outcome` at `q`,
    /// unnormalized.
    fn conditional(&self, q: usize, outcome: MeasurementOutcome) -> BTreeMap<BitString, Complex64> {
        match outcome {
            MeasurementOutcome::Z(v) => self
                .terms
                .iter()
                .filter(|(bits, _)| bits.get(q) == v)
                .map(|(bits, &amp)| (bits.remove(q).1, amp))
                .collect(),
            MeasurementOutcome::X(sign) => self
                .split_on(q)
                .into_iter()
                .map(|(rest, [a0, a1])| (rest, (a0 + a1 * sign.factor()) * FRAC_1_SQRT_2))
                .collect(),
        }
    }

    /// Born probability of `outcome` on qubit `q`.
    pub fn probability(&self, q: usize, outcome: MeasurementOutcome) -> Result<f64> {
        self.check_qubit(q)?;
        Ok(self
            .conditional(q, outcome)
            .values()
            .map(|a| a.norm_sqr())
            .sum())
    }

    /// Projects qubit `q` onto `outcome`, keeping it in the register.
    ///
    /// Returns `None` when the outcome has zero probability.
    pub fn project(&self, q: usize, outcome: MeasurementOutcome) -> Result<Option<(f64, PureState)>> {
        self.check_qubit(q)?;
        let rest = self.conditional(q, outcome);
        let p: f64 = rest.values().map(|a| a.norm_sqr()).sum();
        if p < PRUNE_THRESHOLD * PRUNE_THRESHOLD {
            return Ok(None);
        }
        let scale = 1.0 / p.sqrt();
        let mut terms = BTreeMap::new();
        for (bits, amp) in rest {
            let amp = amp * scale;
            match outcome {
                MeasurementOutcome::Z(v) => {
                    terms.insert(bits.insert(q, v), amp);
                }
                MeasurementOutcome::X(sign) => {
                    terms.insert(bits.insert(q, false), amp * FRAC_1_SQRT_2);
                    terms.insert(bits.insert(q, true), amp * (sign.factor() * FRAC_1_SQRT_2));
                }
            }
        }
        Ok(Some((
            p,
            PureState {
                num_qubits: self.num_qubits,
                terms,
            }
            .pruned(),
        )))
    }

    fn sample<R: Rng + ?Sized>(&self, q: usize, basis: Basis, rng: &mut R) -> Result<MeasurementOutcome> {
        let [first, second] = MeasurementOutcome::both(basis);
        let p_first = self.probability(q, first)?;
        Ok(if rng.random::<f64>() < p_first {
            first
        } else {
            second
        })
    }

    /// Measures qubit `q` in `basis`, returning the outcome and the collapsed
    /// state on the same number of qubits.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        q: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(MeasurementOutcome, PureState)> {
        let outcome = self.sample(q, basis, rng)?;
        let (_, post) = self
            .project(q, outcome)?
            .expect("sampled outcome has nonzero probability");
        Ok((outcome, post))
    }

    /// Measures qubit `q` in `basis` and removes it: the post-measurement
    /// state of the remaining `n - 1` qubits, in their original order.
    pub fn measure_and_remove<R: Rng + ?Sized>(
        &self,
        q: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(MeasurementOutcome, PureState)> {
        let outcome = self.sample(q, basis, rng)?;
        let rest = self.conditional(q, outcome);
        let p: f64 = rest.values().map(|a| a.norm_sqr()).sum();
        let scale = 1.0 / p.sqrt();
        let terms = rest.into_iter().map(|(b, a)| (b, a * scale)).collect();
        Ok((
            outcome,
            PureState {
                num_qubits: self.num_qubits - 1,
                terms,
            }
            .pruned(),
        ))
    }

    /// Single-qubit reduced density operator of qubit `q`.
    pub fn reduced_density(&self, q: usize) -> Result<DensityMatrix2> {
        self.check_qubit(q)?;
        let mut rho = [[Complex64::default(); 2]; 2];
        for [a0, a1] in self.split_on(q).into_values() {
            let a = [a0, a1];
            for (i, row) in rho.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry += a[i] * a[j].conj();
                }
            }
        }
        Ok(DensityMatrix2::new(rho))
    }

    /// Equality up to one global phase, amplitude by amplitude within `tol`.
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> Result<bool> {
        if self.num_qubits != other.num_qubits {
            return Err(invalid(format!(
                "cannot compare a {}-qubit state with a {}-qubit state",
                self.num_qubits, other.num_qubits
            )));
        }
        let Some((pivot, &a)) = self
            .terms
            .iter()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
        else {
            return Ok(other.terms.is_empty());
        };
        let b = other.amplitude(pivot);
        if b.norm() < PRUNE_THRESHOLD {
            return Ok(false);
        }
        let phase = (b / b.norm()) / (a / a.norm());
        let keys = self.terms.keys().chain(other.terms.keys());
        Ok(keys.into_iter().all(|k| (self.amplitude(k) * phase - other.amplitude(k)).norm() <= tol))
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (bits, amp) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i){bits:?}", amp.re, amp.im)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn ket(n: usize, terms: &[(&str, f64)]) -> PureState {
        PureState::from_terms(n, terms.iter().map(|(b, a)| (bits(b), Complex64::new(*a, 0.0)))).unwrap()
    }

    const H: f64 = FRAC_1_SQRT_2;

    #[test]
    fn phi_examples() {
        let bell = PureState::phi(&[false]).unwrap();
        assert!(bell.approx_eq(&ket(2, &[("00", H), ("11", H)]), TOLERANCE).unwrap());

        let phi01 = PureState::phi(&[false, true]).unwrap();
        assert!(phi01.approx_eq(&ket(3, &[("001", H), ("110", H)]), TOLERANCE).unwrap());

        let phi110 = PureState::phi(&[true, true, false]).unwrap();
        assert!(phi110.approx_eq(&ket(4, &[("0110", H), ("1001", H)]), TOLERANCE).unwrap());
        assert_eq!(phi110.num_terms(), 2);
    }

    #[test]
    fn phi_rejects_empty() {
        assert!(matches!(PureState::phi(&[]), Err(crate::Error::InvalidArgument(_))));
    }

    #[test]
    fn decoy_amplitudes() {
        let plus = PureState::decoy(Sign::Plus);
        let minus = PureState::decoy(Sign::Minus);
        assert!((plus.amplitude(&bits("1")).re - H).abs() < 1e-15);
        assert!((minus.amplitude(&bits("1")).re + H).abs() < 1e-15);
        assert!(!plus.approx_eq(&minus, TOLERANCE).unwrap());
        let p = plus.probability(0, MeasurementOutcome::X(Sign::Plus)).unwrap();
        assert!((p - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn tensor_appends_ancilla() {
        let gamma1 = PureState::phi(&[false, true]).unwrap().tensor(&PureState::zeros(1));
        assert!(gamma1.approx_eq(&ket(4, &[("0010", H), ("1100", H)]), TOLERANCE).unwrap());
        assert_eq!(PureState::zeros(1).tensor(&PureState::zeros(1)), PureState::zeros(2));
    }

    #[test]
    fn cnot_errors_and_identity_on_zero_control() {
        let s = PureState::zeros(2);
        assert_eq!(s.cnot(0, 1).unwrap(), s);
        assert!(s.cnot(1, 1).is_err());
        assert!(s.cnot(0, 2).is_err());
    }

    #[test]
    fn two_cnots_leave_parity_on_ancilla() {
        // s = (0,1,1), k = 2, r = 3, ancilla g = 4
        let phi = PureState::phi(&[false, true, true]).unwrap();
        let gamma = phi.tensor(&PureState::zeros(1));
        let gamma2 = gamma.cnot(2, 4).unwrap();
        let expected2 = ket(5, &[("00111", H), ("11000", H)]);
        assert!(gamma2.approx_eq(&expected2, TOLERANCE).unwrap());
        let gamma3 = gamma2.cnot(3, 4).unwrap();
        assert!(gamma3.approx_eq(&phi.tensor(&PureState::zeros(1)), TOLERANCE).unwrap());
    }

    #[test]
    fn z_measurement_of_holder_qubit() {
        let phi = PureState::phi(&[false, true]).unwrap();
        let p0 = phi.probability(0, MeasurementOutcome::Z(false)).unwrap();
        assert!((p0 - 0.5).abs() < TOLERANCE);
        let (_, post0) = phi.project(0, MeasurementOutcome::Z(false)).unwrap().unwrap();
        assert!(post0.approx_eq(&ket(3, &[("001", 1.0)]), TOLERANCE).unwrap());
        let (_, post1) = phi.project(0, MeasurementOutcome::Z(true)).unwrap().unwrap();
        assert!(post1.approx_eq(&ket(3, &[("110", 1.0)]), TOLERANCE).unwrap());
    }

    #[test]
    fn eigenstate_measurement_is_certain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (o, post) = PureState::zeros(1).measure(0, Basis::Z, &mut rng).unwrap();
            assert_eq!(o, MeasurementOutcome::Z(false));
            assert_eq!(post, PureState::zeros(1));
        }
        assert!(PureState::zeros(1).measure(1, Basis::Z, &mut rng).is_err());
    }

    #[test]
    fn x_projection_of_basis_state() {
        let (p, post) = PureState::zeros(1)
            .project(0, MeasurementOutcome::X(Sign::Minus))
            .unwrap()
            .unwrap();
        assert!((p - 0.5).abs() < TOLERANCE);
        assert!(post.approx_eq(&PureState::decoy(Sign::Minus), TOLERANCE).unwrap());
    }

    #[test]
    fn measure_and_remove_factors_out_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi = PureState::phi(&[true, false, true]).unwrap();
        for _ in 0..50 {
            let (o, mut rest) = phi.measure_and_remove(0, Basis::X, &mut rng).unwrap();
            assert_eq!(rest.num_qubits(), 3);
            assert_eq!(rest.num_terms(), 2);
            assert!((rest.norm_sqr() - 1.0).abs() < TOLERANCE);
            // the X signs of the remaining qubits multiply to the removed sign
            let mut product = Sign::Plus;
            while rest.num_qubits() > 0 {
                let (o2, next) = rest.measure_and_remove(0, Basis::X, &mut rng).unwrap();
                product = product * o2.sign().unwrap();
                rest = next;
            }
            assert_eq!(product, o.sign().unwrap());
        }
    }

    #[test]
    fn approx_eq_ignores_global_phase() {
        let a = PureState::phi(&[true]).unwrap();
        let b = PureState::from_terms(
            2,
            a.terms().map(|(k, v)| (k.clone(), v * Complex64::new(0.0, -1.0))),
        )
        .unwrap();
        assert!(a.approx_eq(&b, TOLERANCE).unwrap());
        assert!(a.approx_eq(&PureState::zeros(3), TOLERANCE).is_err());
    }

    #[test]
    fn from_terms_validates() {
        assert!(PureState::from_terms(2, [(bits("0"), Complex64::new(1.0, 0.0))]).is_err());
        assert!(PureState::from_terms(1, [(bits("0"), Complex64::new(0.5, 0.0))]).is_err());
    }

    #[test]
    fn maximally_mixed_member() {
        let phi = PureState::phi(&[false, true]).unwrap();
        assert!(phi.reduced_density(1).unwrap().is_maximally_mixed(TOLERANCE));
        let plus = PureState::decoy(Sign::Plus).reduced_density(0).unwrap();
        assert!(plus.approx_eq(&DensityMatrix2::projector(&PureState::decoy(Sign::Plus)), TOLERANCE));
        let tapped = PureState::decoy(Sign::Plus)
            .tensor(&PureState::zeros(1))
            .cnot(0, 1)
            .unwrap();
        assert!(tapped.reduced_density(0).unwrap().is_maximally_mixed(TOLERANCE));
    }
}
