// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense statevector over a register of four-level ions.
//!
//! Every ion carries the qubit levels `S` (logical 1) and `D` (logical 0) and
//! the cache levels `S'`/`D'`. Amplitudes are stored in base-4 order with ion
//! 0 as the most significant digit; the digit of each level is its
//! [`IonLevel::digit`], so restricted to the qubit subspace the base-4 digits
//! coincide with the logical bit values.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{unitarity_error, CMatrix, ONE, ZERO};

pub const MAX_IONS: usize = 12;

/// Tolerance below which a population counts as empty.
pub const POPULATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IonLevel {
    /// Metastable qubit level, logical 0.
    D,
    /// Ground qubit level, logical 1. Fluoresces under detection light.
    S,
    /// Cache ground level `S'`. Fluoresces.
    Sp,
    /// Cache metastable level `D'`.
    Dp,
}

impl IonLevel {
    pub const ALL: [IonLevel; 4] = [IonLevel::D, IonLevel::S, IonLevel::Sp, IonLevel::Dp];

    pub const fn digit(self) -> usize {
        match self {
            IonLevel::D => 0,
            IonLevel::S => 1,
            IonLevel::Sp => 2,
            IonLevel::Dp => 3,
        }
    }

    pub const fn from_digit(d: usize) -> IonLevel {
        match d & 3 {
            0 => IonLevel::D,
            1 => IonLevel::S,
            2 => IonLevel::Sp,
            _ => IonLevel::Dp,
        }
    }

    /// Logical qubit level for a bit value.
    pub const fn from_bit(bit: u8) -> IonLevel {
        if bit == 0 {
            IonLevel::D
        } else {
            IonLevel::S
        }
    }

    pub const fn is_qubit(self) -> bool {
        matches!(self, IonLevel::S | IonLevel::D)
    }

    /// Ground-state manifold levels scatter photons during detection.
    pub const fn is_bright(self) -> bool {
        matches!(self, IonLevel::S | IonLevel::Sp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IonState {
    num_ions: usize,
    amps: Vec<Complex64>,
}

impl IonState {
    /// Register with every ion in `S` (logical 1).
    pub fn new(num_ions: usize) -> Result<Self> {
        Self::from_levels(&vec![IonLevel::S; num_ions])
    }

    pub fn from_levels(levels: &[IonLevel]) -> Result<Self> {
        let num_ions = levels.len();
        check_register_size(num_ions)?;
        let mut amps = vec![ZERO; 1 << (2 * num_ions)];
        let idx = levels.iter().fold(0usize, |acc, l| acc * 4 + l.digit());
        amps[idx] = ONE;
        Ok(Self { num_ions, amps })
    }

    /// Qubit-subspace basis state; bit `i` of `bits` (MSB first) goes to ion `i`.
    pub fn from_qubit_bits(num_ions: usize, bits: usize) -> Result<Self> {
        let levels: Vec<IonLevel> = (0..num_ions)
            .map(|i| IonLevel::from_bit(((bits >> (num_ions - 1 - i)) & 1) as u8))
            .collect();
        Self::from_levels(&levels)
    }

    pub fn from_amplitudes(num_ions: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_register_size(num_ions)?;
        if amps.len() != 1 << (2 * num_ions) {
            return Err(Error::Argument(format!(
                "expected {} amplitudes for {} ions, got {}",
                1usize << (2 * num_ions),
                num_ions,
                amps.len()
            )));
        }
        let s = Self { num_ions, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn num_ions(&self) -> usize {
        self.num_ions
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, levels: &[IonLevel]) -> Complex64 {
        self.amps[self.index_of(levels)]
    }

    pub fn index_of(&self, levels: &[IonLevel]) -> usize {
        assert_eq!(levels.len(), self.num_ions);
        levels.iter().fold(0usize, |acc, l| acc * 4 + l.digit())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn stride(&self, ion: usize) -> usize {
        1 << (2 * (self.num_ions - 1 - ion))
    }

    pub(crate) fn digit(&self, index: usize, ion: usize) -> usize {
        (index / self.stride(ion)) & 3
    }

    fn check_ion(&self, ion: usize) -> Result<()> {
        if ion >= self.num_ions {
            return Err(Error::Argument(format!(
                "ion {ion} outside register of {} ions",
                self.num_ions
            )));
        }
        Ok(())
    }

    fn check_ions(&self, ions: &[usize]) -> Result<()> {
        for (k, &ion) in ions.iter().enumerate() {
            self.check_ion(ion)?;
            if ions[..k].contains(&ion) {
                return Err(Error::Argument(format!("ion {ion} listed twice")));
            }
        }
        Ok(())
    }

    /// Total population of `ion` in the given levels.
    pub fn population(&self, ion: usize, levels: &[IonLevel]) -> f64 {
        let stride = self.stride(ion);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| levels.contains(&IonLevel::from_digit(i / stride)))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Population of `ion` in the fluorescing levels `{S, S'}`.
    pub fn bright_population(&self, ion: usize) -> f64 {
        self.population(ion, &[IonLevel::S, IonLevel::Sp])
    }

    /// Applies `u` (dimension `4^|ions|`) to the listed ions, first ion most
    /// significant in `u`'s index.
    pub fn apply_unitary(&mut self, u: &CMatrix, ions: &[usize]) -> Result<()> {
        self.check_ions(ions)?;
        let d = 1usize << (2 * ions.len());
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::Argument(format!(
                "matrix is {}x{}, expected {d}x{d} for {} ions",
                u.nrows(),
                u.ncols(),
                ions.len()
            )));
        }
        let err = unitarity_error(u);
        if err >= 1e-9 {
            return Err(Error::Validation(format!(
                "matrix is not unitary (max |U†U - I| = {err:.3e})"
            )));
        }
        if ions.len() == 1 {
            let mut m = [ZERO; 16];
            for r in 0..4 {
                for c in 0..4 {
                    m[r * 4 + c] = u[(r, c)];
                }
            }
            self.apply_local(&m, ions[0]);
        } else {
            self.apply_multi_unchecked(u, ions);
        }
        Ok(())
    }

    /// Row-major 4×4 operator on one ion. No validation.
    pub(crate) fn apply_local(&mut self, m: &[Complex64; 16], ion: usize) {
        let stride = self.stride(ion);
        let block = stride * 4;
        for base in (0..self.amps.len()).step_by(block) {
            for low in 0..stride {
                let i0 = base + low;
                let v = [
                    self.amps[i0],
                    self.amps[i0 + stride],
                    self.amps[i0 + 2 * stride],
                    self.amps[i0 + 3 * stride],
                ];
                for r in 0..4 {
                    let row = &m[r * 4..r * 4 + 4];
                    self.amps[i0 + r * stride] =
                        row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
            }
        }
    }

    fn apply_multi_unchecked(&mut self, u: &CMatrix, ions: &[usize]) {
        let k = ions.len();
        let d = 1usize << (2 * k);
        let strides: Vec<usize> = ions.iter().map(|&i| self.stride(i)).collect();
        let offsets: Vec<usize> = (0..d)
            .map(|sub| {
                (0..k)
                    .map(|j| ((sub >> (2 * (k - 1 - j))) & 3) * strides[j])
                    .sum()
            })
            .collect();
        let mask: usize = strides.iter().map(|s| 3 * s).sum();
        let mut gathered = vec![ZERO; d];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (sub, off) in offsets.iter().enumerate() {
                gathered[sub] = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, g) in gathered.iter().enumerate() {
                    acc += u[(r, c)] * g;
                }
                self.amps[base + off] = acc;
            }
        }
    }

    /// Multiplies each amplitude by `phase(index)`.
    pub(crate) fn apply_diagonal<F: Fn(usize) -> Complex64>(&mut self, phase: F) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phase(i);
        }
    }

    /// Permutes qubit-subspace basis states of `ions`.
    ///
    /// `table[x] = y` maps the logical bit string `x` of the listed ions (first
    /// ion most significant) to `y`. Components in which any listed ion sits
    /// in a cache level are left untouched.
    pub fn apply_qubit_permutation(&mut self, ions: &[usize], table: &[usize]) -> Result<()> {
        self.check_ions(ions)?;
        let k = ions.len();
        if table.len() != 1 << k {
            return Err(Error::Argument(format!(
                "permutation table has {} entries, expected {}",
                table.len(),
                1usize << k
            )));
        }
        let mut seen = vec![false; table.len()];
        for &t in table {
            if t >= table.len() || seen[t] {
                return Err(Error::Argument("permutation table is not a bijection".into()));
            }
            seen[t] = true;
        }
        let strides: Vec<usize> = ions.iter().map(|&i| self.stride(i)).collect();
        let mask: usize = strides.iter().map(|s| 3 * s).sum();
        let offset = |bits: usize| -> usize {
            (0..k)
                .map(|j| ((bits >> (k - 1 - j)) & 1) * strides[j])
                .sum()
        };
        let offsets: Vec<usize> = (0..table.len()).map(offset).collect();
        let mut gathered = vec![ZERO; table.len()];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (x, off) in offsets.iter().enumerate() {
                gathered[x] = self.amps[base + off];
            }
            for (x, g) in gathered.iter().enumerate() {
                self.amps[base + offsets[table[x]]] = *g;
            }
        }
        Ok(())
    }

    /// Probability that `ion` is found in `level` digit set, and the collapse
    /// onto it. Returns the pre-collapse probability; the state is left
    /// unnormalised when the probability is zero.
    fn project_onto(&mut self, ion: usize, keep: impl Fn(IonLevel) -> bool) -> f64 {
        let stride = self.stride(ion);
        let mut p = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if keep(IonLevel::from_digit(i / stride)) {
                p += a.norm_sqr();
            } else {
                *a = ZERO;
            }
        }
        if p > 0.0 {
            let s = 1.0 / p.sqrt();
            for a in self.amps.iter_mut() {
                *a *= s;
            }
        }
        p
    }

    /// Projects `ion` onto the bright (`outcome = 1`) or dark manifold and
    /// renormalises. Returns the Born probability of that outcome.
    pub fn project(&mut self, ion: usize, outcome: u8) -> Result<f64> {
        self.check_ion(ion)?;
        let bright = outcome == 1;
        let p = self.project_onto(ion, |l| l.is_bright() == bright);
        if p <= 0.0 {
            return Err(Error::Contract(format!(
                "outcome {outcome} on ion {ion} has zero probability"
            )));
        }
        Ok(p)
    }

    /// Fluorescence readout of a single ion.
    ///
    /// Every other ion must already be shelved out of `{S, S'}`, otherwise its
    /// scattered light would also be projected.
    pub fn measure_ion<R: Rng + ?Sized>(&mut self, ion: usize, rng: &mut R) -> Result<u8> {
        self.check_ion(ion)?;
        self.check_norm()?;
        self.check_readout_protection(ion)?;
        let p1 = self.bright_population(ion).clamp(0.0, 1.0);
        let outcome = u8::from(rng.random::<f64>() < p1);
        self.project(ion, outcome)?;
        Ok(outcome)
    }

    pub fn check_readout_protection(&self, ion: usize) -> Result<()> {
        for other in (0..self.num_ions).filter(|&o| o != ion) {
            let population = self.bright_population(other);
            if population > POPULATION_TOL {
                return Err(Error::Protection { ion: other, population });
            }
        }
        Ok(())
    }

    pub(crate) fn check_norm(&self) -> Result<()> {
        let n = self.norm();
        if n < 1.0 - 1e-8 || n > 1.0 + 1e-8 {
            return Err(Error::Internal(format!("state norm drifted to {n}")));
        }
        Ok(())
    }

    /// Reinitialises a just-measured ion to `S`.
    pub fn reset_ion(&mut self, ion: usize) -> Result<()> {
        self.check_ion(ion)?;
        let in_s = self.population(ion, &[IonLevel::S]);
        let in_d = self.population(ion, &[IonLevel::D]);
        let definite = (in_s - 1.0).abs() < POPULATION_TOL || (in_d - 1.0).abs() < POPULATION_TOL;
        if !definite {
            return Err(Error::Contract(format!(
                "reset of ion {ion} requires a projected qubit level (S: {in_s:.3e}, D: {in_d:.3e})"
            )));
        }
        let stride = self.stride(ion);
        let shift = (IonLevel::S.digit() - IonLevel::D.digit()) * stride;
        for i in 0..self.amps.len() {
            if IonLevel::from_digit(i / stride) == IonLevel::D {
                let a = std::mem::replace(&mut self.amps[i], ZERO);
                self.amps[i + shift] += a;
            }
        }
        Ok(())
    }

    /// Reduced density matrix of `ions` (dimension `4^|ions|`).
    pub fn reduced_density_matrix(&self, ions: &[usize]) -> Result<CMatrix> {
        self.check_ions(ions)?;
        let k = ions.len();
        let d = 1usize << (2 * k);
        let strides: Vec<usize> = ions.iter().map(|&i| self.stride(i)).collect();
        let mask: usize = strides.iter().map(|s| 3 * s).sum();
        let offsets: Vec<usize> = (0..d)
            .map(|sub| {
                (0..k)
                    .map(|j| ((sub >> (2 * (k - 1 - j))) & 3) * strides[j])
                    .sum()
            })
            .collect();
        let mut rho = CMatrix::zeros(d, d);
        for base in (0..self.amps.len()).filter(|b| b & mask == 0) {
            for r in 0..d {
                let ar = self.amps[base + offsets[r]];
                if ar == ZERO {
                    continue;
                }
                for c in 0..d {
                    rho[(r, c)] += ar * self.amps[base + offsets[c]].conj();
                }
            }
        }
        Ok(rho)
    }

    /// Outcome probabilities over the logical basis of `ions` (first ion most
    /// significant), with all other ions traced out. Population outside the
    /// qubit subspace of `ions` is not counted.
    pub fn qubit_probabilities(&self, ions: &[usize]) -> Vec<f64> {
        let k = ions.len();
        let mut probs = vec![0.0; 1 << k];
        'outer: for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut bits = 0usize;
            for &ion in ions {
                let level = IonLevel::from_digit(self.digit(i, ion));
                if !level.is_qubit() {
                    continue 'outer;
                }
                bits = (bits << 1) | level.digit();
            }
            probs[bits] += p;
        }
        probs
    }

    /// Debug dump: `[[re, im], ...]` in base-4 index order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.amps
                .iter()
                .map(|a| serde_json::json!([a.re, a.im]))
                .collect(),
        )
    }
}

fn check_register_size(num_ions: usize) -> Result<()> {
    if !(1..=MAX_IONS).contains(&num_ions) {
        return Err(Error::Config(format!(
            "register must hold 1..={MAX_IONS} ions, got {num_ions}"
        )));
    }
    Ok(())
}

/// Append-only record of in-sequence measurement results.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalRegister {
    bits: Vec<u8>,
    labels: Vec<String>,
}

impl ClassicalRegister {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, bit: u8, label: impl Into<String>) {
        self.bits.push(bit & 1);
        self.labels.push(label.into());
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<u8> {
        self.bits.get(index).copied()
    }

    /// Integer with the first recorded bit as the least significant bit.
    pub fn value_lsb_first(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .map(|(t, &b)| u64::from(b) << t)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, permutation_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn superposed_pair() -> IonState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 16];
        // ion 0 in (S + D)/√2, ion 1 in D
        amps[IonLevel::S.digit() * 4] = Complex64::new(h, 0.0);
        amps[IonLevel::D.digit() * 4] = Complex64::new(0.0, h);
        IonState::from_amplitudes(2, amps).unwrap()
    }

    #[test]
    fn init_is_all_s() {
        let s = IonState::new(1).unwrap();
        assert_eq!(s.amplitude(&[IonLevel::S]), ONE);
        assert_eq!(s.dim(), 4);
        let s5 = IonState::new(5).unwrap();
        assert_eq!(s5.amplitude(&[IonLevel::S; 5]), ONE);
        assert!((IonState::new(2).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn init_rejects_bad_sizes() {
        assert!(matches!(IonState::new(0), Err(Error::Config(_))));
        assert!(matches!(IonState::new(13), Err(Error::Config(_))));
    }

    #[test]
    fn level_swap_flips_s_to_d() {
        let mut s = IonState::new(1).unwrap();
        let mut swap = [0, 1, 2, 3];
        swap.swap(IonLevel::S.digit(), IonLevel::D.digit());
        s.apply_unitary(&permutation_matrix(&swap), &[0]).unwrap();
        assert!((s.amplitude(&[IonLevel::D]) - ONE).norm() < 1e-15);
    }

    #[test]
    fn apply_rejects_non_unitary_and_duplicates() {
        let mut s = IonState::new(2).unwrap();
        let bad = CMatrix::from_element(4, 4, ONE);
        assert!(matches!(s.apply_unitary(&bad, &[0]), Err(Error::Validation(_))));
        let id = CMatrix::identity(16, 16);
        assert!(matches!(s.apply_unitary(&id, &[1, 1]), Err(Error::Argument(_))));
    }

    #[test]
    fn deterministic_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = IonState::new(1).unwrap();
        assert_eq!(s.measure_ion(0, &mut rng).unwrap(), 1);
        let mut d = IonState::from_levels(&[IonLevel::D]).unwrap();
        let before = d.clone();
        assert_eq!(d.measure_ion(0, &mut rng).unwrap(), 0);
        assert_eq!(d, before);
    }

    #[test]
    fn measurement_requires_protection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = IonState::from_levels(&[IonLevel::D, IonLevel::Sp]).unwrap();
        match s.measure_ion(0, &mut rng) {
            Err(Error::Protection { ion, population }) => {
                assert_eq!(ion, 1);
                assert!((population - 1.0).abs() < 1e-12);
            }
            other => panic!("expected protection error, got {other:?}"),
        }
    }

    #[test]
    fn born_frequency_of_equal_superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = superposed_pair();
        let trials = 100_000;
        let ones: usize = (0..trials)
            .map(|_| base.clone().measure_ion(0, &mut rng).unwrap() as usize)
            .sum();
        let f = ones as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.01, "frequency {f}");
    }

    #[test]
    fn reset_after_either_outcome() {
        for levels in [[IonLevel::D, IonLevel::S], [IonLevel::S, IonLevel::S]] {
            let mut s = IonState::from_levels(&levels).unwrap();
            s.reset_ion(0).unwrap();
            assert!((s.population(0, &[IonLevel::S]) - 1.0).abs() < 1e-15);
            assert!((s.population(1, &[IonLevel::S]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn reset_rejects_superposition() {
        let mut s = superposed_pair();
        assert!(matches!(s.reset_ion(0), Err(Error::Contract(_))));
    }

    #[test]
    fn reset_leaves_others_reduced_state() {
        // ion 0 dark, ions 1,2 entangled
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 64];
        let mk = |l: [IonLevel; 3]| l.iter().fold(0, |a, x| a * 4 + x.digit());
        amps[mk([IonLevel::D, IonLevel::S, IonLevel::D])] = Complex64::new(h, 0.0);
        amps[mk([IonLevel::D, IonLevel::D, IonLevel::Sp])] = Complex64::new(0.0, -h);
        let mut s = IonState::from_amplitudes(3, amps).unwrap();
        let before = s.reduced_density_matrix(&[1, 2]).unwrap();
        s.reset_ion(0).unwrap();
        let after = s.reduced_density_matrix(&[1, 2]).unwrap();
        assert!(max_abs_diff(&before, &after) < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_permutation_matches_matrix() {
        let s0 = superposed_pair();
        let mut a = s0.clone();
        // swap the two ions' logical values
        a.apply_qubit_permutation(&[0, 1], &[0, 2, 1, 3]).unwrap();
        assert!((a.population(1, &[IonLevel::S]) - 0.5).abs() < 1e-12);
        assert!((a.population(0, &[IonLevel::D]) - 1.0).abs() < 1e-12);
        assert!(a.apply_qubit_permutation(&[0, 1], &[0, 0, 1, 3]).is_err());
    }

    #[test]
    fn json_dump_has_pairs() {
        let v = IonState::new(1).unwrap().to_json();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 4);
        assert_eq!(arr[IonLevel::S.digit()], serde_json::json!([1.0, 0.0]));
    }
}
