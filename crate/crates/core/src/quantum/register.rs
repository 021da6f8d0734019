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

//! A collection of independent sparse states addressed by qubit labels.
//!
//! Qubits start out in separate components (one per carrier state, decoy or
//! ancilla). A CNOT between two components merges them into their tensor
//! product; measuring a qubit removes it from its component. Components that
//! never interact are never multiplied out, so the cost tracks the actual
//! entanglement structure rather than the total qubit count.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use super::density::DensityMatrix2;
use super::state::{Basis, MeasurementOutcome, PureState};
use crate::error::{invalid, Result};

#[derive(Debug, Clone)]
struct Component<L> {
    state: PureState,
    labels: Vec<L>,
}

/// Labeled multi-component register.
#[derive(Debug, Clone)]
pub struct Register<L> {
    components: Vec<Option<Component<L>>>,
    index: HashMap<L, usize>,
}

impl<L: Copy + Eq + Hash + Debug> Default for Register<L> {
    fn default() -> Self {
        Register {
            components: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<L: Copy + Eq + Hash + Debug> Register<L> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `state` as a new component; `labels[i]` names qubit `i`.
    pub fn insert(&mut self, state: PureState, labels: &[L]) -> Result<()> {
        if labels.len() != state.num_qubits() {
            return Err(invalid(format!(
                "{} labels for a {}-qubit state",
                labels.len(),
                state.num_qubits()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if self.index.contains_key(l) || labels[..i].contains(l) {
                return Err(invalid(format!("qubit label {l:?} already in use")));
            }
        }
        let slot = self.components.len();
        for &l in labels {
            self.index.insert(l, slot);
        }
        self.components.push(Some(Component {
            state,
            labels: labels.to_vec(),
        }));
        Ok(())
    }

    pub fn contains(&self, label: L) -> bool {
        self.index.contains_key(&label)
    }

    fn locate(&self, label: L) -> Result<(usize, usize)> {
        let slot = *self
            .index
            .get(&label)
            .ok_or_else(|| invalid(format!("unknown qubit {label:?}")))?;
        let comp = self.components[slot].as_ref().expect("indexed slot is live");
        let pos = comp.labels.iter().position(|&l| l == label).expect("label in component");
        Ok((slot, pos))
    }

    /// The component holding `label` and the label order of its qubits.
    pub fn component_of(&self, label: L) -> Result<(&PureState, &[L])> {
        let (slot, _) = self.locate(label)?;
        let comp = self.components[slot].as_ref().expect("live");
        Ok((&comp.state, &comp.labels))
    }

    fn merge(&mut self, a: usize, b: usize) -> usize {
        let second = self.components[b].take().expect("live");
        let first = self.components[a].as_mut().expect("live");
        first.state = first.state.tensor(&second.state);
        for l in &second.labels {
            self.index.insert(*l, a);
        }
        first.labels.extend(second.labels);
        a
    }

    pub fn cnot(&mut self, control: L, target: L) -> Result<()> {
        let (cs, _) = self.locate(control)?;
        let (ts, _) = self.locate(target)?;
        let slot = if cs == ts { cs } else { self.merge(cs, ts) };
        let (_, cp) = self.locate(control)?;
        let (_, tp) = self.locate(target)?;
        let comp = self.components[slot].as_mut().expect("live");
        comp.state = comp.state.cnot(cp, tp)?;
        Ok(())
    }

    /// Measures `label` in `basis` and discards the qubit.
    pub fn measure<R: Rng + ?Sized>(&mut self, label: L, basis: Basis, rng: &mut R) -> Result<MeasurementOutcome> {
        let (slot, pos) = self.locate(label)?;
        let comp = self.components[slot].as_mut().expect("live");
        let (outcome, rest) = comp.state.measure_and_remove(pos, basis, rng)?;
        comp.labels.remove(pos);
        comp.state = rest;
        self.index.remove(&label);
        if comp.labels.is_empty() {
            self.components[slot] = None;
        }
        Ok(outcome)
    }

    pub fn reduced_density(&self, label: L) -> Result<DensityMatrix2> {
        let (slot, pos) = self.locate(label)?;
        self.components[slot].as_ref().expect("live").state.reduced_density(pos)
    }

    /// Largest term count over all live components.
    pub fn max_terms(&self) -> usize {
        self.components
            .iter()
            .flatten()
            .map(|c| c.state.num_terms())
            .max()
            .unwrap_or(0)
    }

    pub fn num_components(&self) -> usize {
        self.components.iter().flatten().count()
    }

    pub fn num_qubits(&self) -> usize {
        self.index.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{Sign, TOLERANCE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn merge_on_cnot_and_shrink_on_measure() {
        let mut reg = Register::new();
        reg.insert(PureState::phi(&[false, true]).unwrap(), &[0, 1, 2]).unwrap();
        reg.insert(PureState::zeros(1), &[9]).unwrap();
        assert_eq!(reg.num_components(), 2);
        reg.cnot(1, 9).unwrap();
        reg.cnot(2, 9).unwrap();
        assert_eq!(reg.num_components(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = reg.measure(9, Basis::Z, &mut rng).unwrap();
        assert_eq!(g, MeasurementOutcome::Z(true));
        let (state, labels) = reg.component_of(0).unwrap();
        assert_eq!(labels, &[0, 1, 2]);
        assert!(state.approx_eq(&PureState::phi(&[false, true]).unwrap(), TOLERANCE).unwrap());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut reg = Register::new();
        reg.insert(PureState::zeros(1), &['a']).unwrap();
        assert!(reg.insert(PureState::zeros(1), &['a']).is_err());
        assert!(reg.insert(PureState::zeros(2), &['b', 'b']).is_err());
        assert!(reg.insert(PureState::zeros(2), &['c']).is_err());
        assert!(reg.cnot('a', 'z').is_err());
    }

    #[test]
    fn tapped_decoy_is_mixed() {
        let mut reg = Register::new();
        reg.insert(PureState::decoy(Sign::Minus), &[0]).unwrap();
        reg.insert(PureState::zeros(1), &[1]).unwrap();
        reg.cnot(0, 1).unwrap();
        assert!(reg.reduced_density(0).unwrap().is_maximally_mixed(TOLERANCE));
        assert_eq!(reg.max_terms(), 2);
    }
}
