//! Splitting into multihomogeneous components and full polarization.
//!
//! A component of multidegree `(d_1, ..., d_m)` is polarized by giving
//! variable `i` the fresh variables `y_(i,1) .. y_(i,d_i)` and summing over
//! every placement of them at the `d_i` positions where `x_i` occurs.
//! Setting every `y_(i,j) = x_i` recovers `d_1! ... d_m!` times the component.
//! Fresh variables are numbered consecutively, variable by variable,
//! skipping variables of degree zero.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{CoreError, Result};
use crate::limits::Limits;
use crate::poly::TracePolynomial;
use crate::scalar::Scalar;
use crate::word::{Letter, Word};

/// Word terms grouped by degree vector.
pub type Components = BTreeMap<Vec<usize>, Vec<(Word, Scalar)>>;

/// Multihomogeneous components keyed by degree vector.
pub fn components(p: &TracePolynomial) -> Result<Components> {
    let mut out: Components = BTreeMap::new();
    for (w, c) in p.word_terms()? {
        out.entry(w.degrees(p.m())).or_default().push((w, c));
    }
    Ok(out)
}

/// One polarized component together with the original variable behind each
/// fresh variable.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub degrees: Vec<usize>,
    /// `owner[k]` is the zero-based original variable of fresh variable `k`.
    pub owner: Vec<usize>,
    pub poly: TracePolynomial,
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of terms full polarization would produce (exact: distinct
/// placements give distinct words).
pub fn polarized_term_count(p: &TracePolynomial) -> Result<u128> {
    let mut total = BigUint::from(0u8);
    for (degrees, words) in components(p)? {
        let per_word: BigUint = degrees.iter().map(|&d| factorial(d)).product();
        total += per_word * BigUint::from(words.len());
    }
    Ok(total.to_u128().unwrap_or(u128::MAX))
}

/// Fully polarizes every multihomogeneous component of a trace-free `p`.
pub fn polarizations(p: &TracePolynomial, limits: &Limits) -> Result<Vec<Polarization>> {
    let needed = polarized_term_count(p)?;
    if needed > limits.monomial_ceiling {
        return Err(CoreError::Resource {
            what: "multilinearization",
            needed,
            ceiling: limits.monomial_ceiling,
        });
    }
    components(p)?
        .into_iter()
        .map(|(degrees, words)| polarize_component(&degrees, &words))
        .collect()
}

/// Multilinear polynomials whose joint vanishing on a matrix algebra in
/// characteristic zero is equivalent to `p` being an identity there.
pub fn multilinearize(p: &TracePolynomial) -> Result<Vec<TracePolynomial>> {
    multilinearize_with(p, &Limits::default())
}

pub fn multilinearize_with(p: &TracePolynomial, limits: &Limits) -> Result<Vec<TracePolynomial>> {
    Ok(polarizations(p, limits)?.into_iter().map(|pol| pol.poly).collect())
}

fn polarize_component(degrees: &[usize], words: &[(Word, Scalar)]) -> Result<Polarization> {
    let mut offset = vec![0usize; degrees.len()];
    let mut owner = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        offset[i] = owner.len();
        owner.extend(std::iter::repeat_n(i, d));
    }
    if owner.len() > Letter::MAX as usize + 1 {
        return Err(CoreError::Precondition(format!("{} fresh variables exceed the alphabet", owner.len())));
    }
    let mut terms = Vec::new();
    for (w, c) in words {
        // positions[i]: where variable i occurs in w
        let mut positions: Vec<Vec<usize>> = vec![Vec::new(); degrees.len()];
        for (pos, &l) in w.letters().iter().enumerate() {
            positions[l as usize].push(pos);
        }
        let mut perms: Vec<Vec<usize>> = degrees.iter().map(|&d| (0..d).collect()).collect();
        loop {
            let mut letters = vec![0 as Letter; w.len()];
            for (i, perm) in perms.iter().enumerate() {
                for (slot, &pos) in positions[i].iter().enumerate() {
                    letters[pos] = (offset[i] + perm[slot]) as Letter;
                }
            }
            terms.push((Word::new(letters), c.clone()));
            // odometer over the per-variable permutations
            let mut advanced = false;
            for perm in perms.iter_mut().rev() {
                if next_permutation(perm) {
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(Polarization {
        degrees: degrees.to_vec(),
        poly: TracePolynomial::from_word_terms(owner.len(), terms),
        owner,
    })
}

/// Advances to the next lexicographic permutation; on the last one, resets
/// to the first and returns false.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        v.reverse();
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// A polynomial is multilinear when every variable occurs at most once per term.
pub fn is_multilinear(p: &TracePolynomial) -> bool {
    p.terms().keys().all(|k| {
        k.traces.is_empty() && k.plain.degrees(p.m()).iter().all(|&d| d <= 1)
    })
}
