// Copyright 2026 The ionfactor Authors
// SPDX-License-Identifier: Apache-2.0

//! Controlled modular multipliers.
//!
//! Modulo 15 every coprime base is `±2^s`. Multiplying by `2^s` is a cyclic
//! rotation of the 4-bit register, realised with controlled swaps, and the
//! minus sign is a bitwise complement (`15 − y`), realised with one
//! multi-target controlled-NOT. The complement cannot fix 0 or 15 — it
//! exchanges them — which is harmless because both represent the residue 0
//! and neither is reachable from the initial value 1.

use super::arith::{classical_modexp, gcd, register_bits};
use super::gate::{Circuit, LogicalGate};
use crate::error::{Error, Result};

pub const SUPPORTED_BASES: [u64; 6] = [2, 4, 7, 8, 11, 13];

const MODULUS: u64 = 15;
const BITS: usize = 4;

/// Circuit qubit holding value bit `bit` of an `n_bits` register (the most
/// significant bit sits next to the control).
pub fn computational_qubit(bit: usize, n_bits: usize) -> usize {
    1 + (n_bits - 1 - bit)
}

/// `(rotation, complement)` such that `a ≡ (−1)^complement · 2^rotation`.
fn decompose(a: u64) -> Result<(usize, bool)> {
    for s in 0..BITS {
        let p = 1u64 << s;
        if a == p {
            return Ok((s, false));
        }
        if a == MODULUS - p {
            return Ok((s, true));
        }
    }
    Err(Error::Unsupported(format!(
        "base {a} has no rotation/complement multiplier modulo {MODULUS}; supported bases are {SUPPORTED_BASES:?}"
    )))
}

/// Basis permutation of the 4-bit work register realised by
/// [`build_multiplier_circuit`] for base `a` when the control is 1.
pub fn multiplier_permutation(a: u64) -> Result<Vec<usize>> {
    let (s, complement) = decompose(a)?;
    let mask = (1usize << BITS) - 1;
    Ok((0..1usize << BITS)
        .map(|x| {
            let rotated = ((x << s) | (x >> (BITS - s))) & mask;
            if complement {
                rotated ^ mask
            } else {
                rotated
            }
        })
        .collect())
}

/// Transpositions of bit positions realising `bit i → bit (i + s) mod 4`.
fn rotation_swaps(s: usize) -> Vec<(usize, usize)> {
    // arrangement[pos] = original bit currently held at pos
    let mut arrangement: Vec<usize> = (0..BITS).collect();
    let mut swaps = vec![];
    for pos in 0..BITS {
        let want = (pos + BITS - s) % BITS;
        let j = arrangement.iter().position(|&b| b == want).expect("bit present");
        if j != pos {
            arrangement.swap(pos, j);
            swaps.push((pos, j));
        }
    }
    swaps
}

/// Controlled multiplication by `a` modulo 15 on a 5-qubit register.
pub fn build_multiplier_circuit(a: u64) -> Result<Circuit> {
    let (s, complement) = decompose(a)?;
    let mut c = Circuit::kitaev(BITS);
    for (p, q) in rotation_swaps(s) {
        c.push(LogicalGate::CSwap {
            control: 0,
            a: computational_qubit(p.min(q), BITS),
            b: computational_qubit(p.max(q), BITS),
        })?;
    }
    if complement {
        c.push(LogicalGate::MultiCNot { control: 0, targets: (1..=BITS).collect() })?;
    }
    Ok(c)
}

/// First non-trivial multiplication, specialised to the known input 1:
/// controlled flips of exactly the bits in which `a^e mod n` differs from 1.
pub fn build_first_multiplier_map(a: u64, n: u64, e: u64) -> Result<Circuit> {
    let g = gcd(a, n);
    if g != 1 {
        return Err(Error::TrivialFactor { a, n, factor: g });
    }
    let bits = register_bits(n);
    let flips = classical_modexp(a, e, n)? ^ 1;
    let mut targets: Vec<usize> =
        (0..bits).filter(|b| flips >> b & 1 == 1).map(|b| computational_qubit(b, bits)).collect();
    targets.sort_unstable();
    let mut c = Circuit::kitaev(bits);
    if !targets.is_empty() {
        c.push(LogicalGate::MultiCNot { control: 0, targets })?;
    }
    Ok(c)
}

/// Controlled multiplication by `a` modulo any `n`, as one opaque
/// permutation over control and work register. Values `≥ n` are fixed.
pub fn build_generic_multiplier(a: u64, n: u64) -> Result<Circuit> {
    let g = gcd(a, n);
    if g != 1 {
        return Err(Error::TrivialFactor { a, n, factor: g });
    }
    let bits = register_bits(n);
    let half = 1usize << bits;
    let a = a % n;
    let table = (0..2 * half)
        .map(|x| {
            if x < half || (x - half) as u64 >= n {
                x
            } else {
                half + ((x - half) as u64 * a % n) as usize
            }
        })
        .collect();
    let mut c = Circuit::kitaev(bits);
    c.push(LogicalGate::GenericPermutation { targets: (0..=bits).collect(), table })?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::logical::apply_circuit;
    use crate::state::IonState;

    /// Runs `c` on the basis state `(control, value)` and reads the value back.
    fn run(c: &Circuit, control: usize, value: usize) -> (usize, usize) {
        let n = c.num_qubits;
        let mut st = IonState::from_qubit_bits(n, (control << (n - 1)) | value).unwrap();
        apply_circuit(&mut st, c).unwrap();
        let probs = st.qubit_probabilities(&(0..n).collect::<Vec<_>>());
        let out = probs.iter().position(|p| *p > 0.5).unwrap();
        (out >> (n - 1), out & ((1 << (n - 1)) - 1))
    }

    #[test]
    fn permutation_is_modular_multiplication_on_residues() {
        for a in SUPPORTED_BASES {
            let perm = multiplier_permutation(a).unwrap();
            for x in 1..15 {
                assert_eq!(perm[x] as u64, a * x as u64 % 15, "a = {a}, x = {x}");
            }
            assert_eq!(perm[0] as u64 % 15, 0);
            assert_eq!(perm[15] as u64 % 15, 0);
        }
    }

    #[test]
    fn circuits_realise_the_permutation() {
        for a in SUPPORTED_BASES {
            let c = build_multiplier_circuit(a).unwrap();
            let perm = multiplier_permutation(a).unwrap();
            for x in 0..16 {
                assert_eq!(run(&c, 0, x), (0, x));
                assert_eq!(run(&c, 1, x), (1, perm[x]));
            }
        }
    }

    #[test]
    fn gate_counts() {
        let cswaps = |a| build_multiplier_circuit(a).unwrap().count(|g| matches!(g, LogicalGate::CSwap { .. }));
        assert_eq!(cswaps(2), 3);
        assert_eq!(cswaps(4), 2);
        assert_eq!(cswaps(7), 3);
        assert_eq!(build_multiplier_circuit(7).unwrap().gates.len(), 4);
        assert_eq!(build_multiplier_circuit(14).unwrap().gates.len(), 1);
        assert!(matches!(build_multiplier_circuit(6), Err(Error::Unsupported(_))));
    }

    #[test]
    fn first_map_flips_bits_zero_and_two_for_seven_squared() {
        let c = build_first_multiplier_map(7, 15, 2).unwrap();
        assert_eq!(c.gates, vec![LogicalGate::MultiCNot { control: 0, targets: vec![2, 4] }]);
        assert_eq!(run(&c, 1, 1), (1, 4));
        assert_eq!(run(&c, 0, 1), (0, 1));
        assert!(build_first_multiplier_map(11, 15, 2).unwrap().gates.is_empty());
    }

    #[test]
    fn generic_multiplier_mod_21() {
        let c = build_generic_multiplier(2, 21).unwrap();
        for x in 0..32 {
            let expect = if x < 21 { 2 * x % 21 } else { x };
            assert_eq!(run(&c, 1, x), (1, expect));
            assert_eq!(run(&c, 0, x), (0, x));
        }
        assert!(matches!(build_generic_multiplier(3, 21), Err(Error::TrivialFactor { factor: 3, .. })));
    }
}
