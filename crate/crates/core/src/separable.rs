//! Separable overpartition classes `L_k` and `F_k`: membership, the unique
//! basis-plus-padding decomposition, basis generating polynomials, and the
//! bijections between primed basis sets and partitions into distinct parts
//! in a residue class.

use num_bigint::BigInt;
use thiserror::Error;

use crate::enumeration::{basis_elements, BasisFamily, ClassTag};
use crate::overpartition::{Convention, Entry, Overpartition, Part, Partition};
use crate::series::ZQPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparableError {
    #[error("overpartition uses {found:?} but the class needs {expected:?}")]
    ConventionMismatch {
        expected: Convention,
        found: Convention,
    },
    #[error("{0} is not in the class")]
    NotInClass(String),
    #[error("invalid decomposition witness: {0}")]
    InvalidWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Count-based membership, ignoring the convention tag.
///
/// Under the last-occurrence layout the overlined part of size `t` has
/// `#(parts of size < t)` parts after it; under the first-occurrence layout it
/// has `#(parts of size <= t) - 1`. So `L_k` needs the former `≡ 0` and `F_k`
/// needs `#(parts of size <= t) ≡ 0 (mod k)`.
pub fn in_class(pi: &Overpartition, tag: ClassTag) -> bool {
    let k = match tag {
        ClassTag::AllOverpartitions => return true,
        ClassTag::L(k) | ClassTag::F(k) => k,
    };
    let mut at_most = 0; // parts of size <= current
    for e in pi.entries().iter().rev() {
        let below = at_most;
        at_most += e.multiplicity;
        if e.overlined {
            let after = match tag {
                ClassTag::L(_) => below,
                _ => at_most,
            };
            if after % k != 0 {
                return false;
            }
        }
    }
    true
}

/// Membership test; the overpartition's convention must match the class.
pub fn is_member(pi: &Overpartition, tag: ClassTag) -> Result<bool, SeparableError> {
    if tag != ClassTag::AllOverpartitions && pi.convention() != tag.convention() {
        return Err(SeparableError::ConventionMismatch {
            expected: tag.convention(),
            found: pi.convention(),
        });
    }
    Ok(in_class(pi, tag))
}

/// Membership by scanning the laid-out parts for overlined indices `i` and
/// checking `len - i` modulo `k` directly. Used to cross-check [`in_class`].
pub fn is_member_positional(pi: &Overpartition, tag: ClassTag) -> bool {
    let (k, residue) = match tag {
        ClassTag::AllOverpartitions => return true,
        ClassTag::L(k) => (k, 0),
        ClassTag::F(k) => (k, k - 1),
    };
    let parts = pi.with_convention(tag.convention()).parts();
    let len = parts.len();
    parts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.overlined)
        .all(|(idx, _)| (len - (idx + 1)) % k == residue % k)
}

/// Whether `lam` is an element of the basis `BL_k` or `BF_k`. An
/// overpartition tagged with the other convention is never a basis element.
pub fn is_basis_element(lam: &Overpartition, family: BasisFamily, k: usize) -> bool {
    if lam.is_empty() || lam.convention() != family.convention() {
        return false;
    }
    if !in_class(lam, family.class(k)) {
        return false;
    }
    let parts = lam.parts();
    let smallest = parts[parts.len() - 1];
    let smallest_ok = match family {
        BasisFamily::Bl => smallest.size == 1,
        BasisFamily::Bf if k == 1 => smallest.size == 1,
        BasisFamily::Bf => smallest == Part::plain(1),
    };
    if !smallest_ok {
        return false;
    }
    parts.windows(2).all(|w| {
        let strict = match family {
            BasisFamily::Bl => !w[0].overlined,
            BasisFamily::Bf => !w[1].overlined,
        };
        if strict {
            w[0].size < w[1].size + 1
        } else {
            w[0].size <= w[1].size + 1
        }
    })
}

/// A basis element together with the non-increasing padding added partwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub basis: Overpartition,
    pub padding: Vec<usize>,
}

/// Partwise sum of basis and padding; an overlined basis part stays
/// overlined.
pub fn compose(w: &DecompositionWitness) -> Result<Overpartition, SeparableError> {
    let parts = w.basis.parts();
    if parts.len() != w.padding.len() {
        return Err(SeparableError::InvalidWitness(format!(
            "padding has {} entries for {} basis parts",
            w.padding.len(),
            parts.len()
        )));
    }
    if w.padding.windows(2).any(|p| p[0] < p[1]) {
        return Err(SeparableError::InvalidWitness(
            "padding is not non-increasing".into(),
        ));
    }
    let summed: Vec<Part> = parts
        .iter()
        .zip(&w.padding)
        .map(|(p, &d)| Part {
            size: p.size + d,
            overlined: p.overlined,
        })
        .collect();
    Overpartition::from_parts(&summed, w.basis.convention())
        .map_err(|e| SeparableError::InvalidWitness(e.to_string()))
}

/// The unique decomposition of a class member into a basis element plus a
/// non-increasing padding.
///
/// The basis element keeps the overline pattern of `pi` and is rebuilt from
/// its smallest part upward: in `BL_k` a part is one larger than the next
/// part exactly when it is overlined, in `BF_k` exactly when the next part is
/// overlined. The result is checked before it is returned.
pub fn decompose(
    pi: &Overpartition,
    family: BasisFamily,
    k: usize,
) -> Result<DecompositionWitness, SeparableError> {
    if !is_member(pi, family.class(k))? {
        return Err(SeparableError::NotInClass(pi.to_string()));
    }
    let parts = pi.parts();
    let m = parts.len();
    if m == 0 {
        return Ok(DecompositionWitness {
            basis: pi.clone(),
            padding: Vec::new(),
        });
    }
    let mut sizes = vec![1usize; m];
    for i in (0..m - 1).rev() {
        let step = match family {
            BasisFamily::Bl => parts[i].overlined,
            BasisFamily::Bf => parts[i + 1].overlined,
        };
        sizes[i] = sizes[i + 1] + usize::from(step);
    }
    let basis_parts: Vec<Part> = parts
        .iter()
        .zip(&sizes)
        .map(|(p, &size)| Part {
            size,
            overlined: p.overlined,
        })
        .collect();
    let basis = Overpartition::from_parts(&basis_parts, family.convention())
        .map_err(|e| SeparableError::InvalidWitness(e.to_string()))?;
    let padding = parts
        .iter()
        .zip(&sizes)
        .map(|(p, &s)| p.size.checked_sub(s))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SeparableError::InvalidWitness("negative padding".into()))?;
    let witness = DecompositionWitness { basis, padding };
    if !is_basis_element(&witness.basis, family, k) {
        return Err(SeparableError::InvalidWitness(format!(
            "{} is not in {family}_{k}",
            witness.basis
        )));
    }
    if compose(&witness)? != *pi {
        return Err(SeparableError::InvalidWitness(
            "composition does not reproduce the input".into(),
        ));
    }
    Ok(witness)
}

/// `sum z^{#overlined} q^{weight}` over basis elements with `parts` parts whose
/// largest part has size `j` and the given overline state. The truncation is
/// `parts (parts + 1) / 2`, which bounds the weight of any such element.
pub fn basis_gf(
    family: BasisFamily,
    k: usize,
    parts: usize,
    j: usize,
    overlined: bool,
) -> ZQPoly {
    let trunc = parts * (parts + 1) / 2;
    let mut out = ZQPoly::zero(trunc);
    for lam in basis_elements(family, k, parts) {
        let top = lam.entries()[0];
        let top_overlined = match family {
            // the first laid-out part carries the overline only under the
            // first-occurrence layout or when the size occurs once
            BasisFamily::Bl => top.overlined && top.multiplicity == 1,
            BasisFamily::Bf => top.overlined,
        };
        if top.size == j && top_overlined == overlined {
            out = &out + &ZQPoly::monomial(lam.overlined_count(), lam.weight(), BigInt::from(1), trunc);
        }
    }
    out
}

/// Toggles the overline on the smallest part (`BL`, which must have size 1)
/// or on the largest part (`BF`).
pub fn toggle_extreme_overline(
    lam: &Overpartition,
    family: BasisFamily,
) -> Result<Overpartition, SeparableError> {
    let mut entries: Vec<Entry> = lam.entries().to_vec();
    let target = match family {
        BasisFamily::Bl => match entries.last_mut() {
            Some(e) if e.size == 1 => e,
            _ => {
                return Err(SeparableError::Precondition(
                    "smallest part must have size 1".into(),
                ))
            }
        },
        BasisFamily::Bf => entries
            .first_mut()
            .ok_or_else(|| SeparableError::Precondition("empty overpartition".into()))?,
    };
    target.overlined = !target.overlined;
    Ok(Overpartition::from_entries(entries, lam.convention()))
}

fn check_residue(len: usize, k: usize, s: usize) -> Result<(), SeparableError> {
    if k == 0 || !(1..=k).contains(&s) {
        return Err(SeparableError::Precondition(format!(
            "need 1 <= s <= k, got s={s}, k={k}"
        )));
    }
    if len % k != s % k {
        return Err(SeparableError::Precondition(format!(
            "length {len} is not ≡ {s} (mod {k})"
        )));
    }
    Ok(())
}

// Strips `per_size` parts from each size below j and `at_top` parts of size j,
// conjugates what is left and adds the staircase (k(j-1)+s, ..., k+s, s).
fn staircase_to_distinct(
    lam: &Overpartition,
    k: usize,
    s: usize,
    at_top: usize,
) -> Result<Partition, SeparableError> {
    let j = lam.largest_size().expect("nonempty");
    let mut rest = Vec::new();
    for t in 1..=j {
        let remove = if t < j { k } else { at_top };
        let have = lam.count_of_size(t);
        let left = have.checked_sub(remove).ok_or_else(|| {
            SeparableError::Precondition(format!("too few parts of size {t}"))
        })?;
        if left % k != 0 {
            return Err(SeparableError::Precondition(format!(
                "leftover multiplicity {left} of size {t} is not divisible by {k}"
            )));
        }
        rest.extend(std::iter::repeat_n(t, left));
    }
    let mu = Partition::from_unsorted(rest);
    let conj = mu.conjugate();
    let nu = (1..=j)
        .map(|i| conj.parts().get(i - 1).copied().unwrap_or(0) + k * (j - i) + s)
        .collect();
    Ok(Partition::new(nu).expect("staircase keeps parts decreasing"))
}

// Inverse of `staircase_to_distinct`: multiplicities of sizes 1..=j of the
// basis element, before overlines are placed.
fn distinct_to_multiplicities(
    nu: &Partition,
    k: usize,
    s: usize,
    at_top: usize,
) -> Result<Vec<usize>, SeparableError> {
    if k == 0 || !(1..=k).contains(&s) {
        return Err(SeparableError::Precondition(format!(
            "need 1 <= s <= k, got s={s}, k={k}"
        )));
    }
    let j = nu.len();
    if j == 0 {
        return Err(SeparableError::Precondition("empty partition".into()));
    }
    let parts = nu.parts();
    if parts.windows(2).any(|w| w[0] == w[1]) || parts.iter().any(|&p| p % k != s % k) {
        return Err(SeparableError::Precondition(format!(
            "{nu} does not have distinct parts ≡ {s} (mod {k})"
        )));
    }
    let conj_parts: Vec<usize> = parts
        .iter()
        .enumerate()
        .map(|(idx, &p)| p - k * (j - 1 - idx) - s)
        .collect();
    let mu = Partition::from_unsorted(conj_parts).conjugate();
    let mut mults = vec![0usize; j + 1];
    for &p in mu.parts() {
        mults[p] += 1;
    }
    for (t, m) in mults.iter_mut().enumerate().skip(1) {
        *m += if t < j { k } else { at_top };
    }
    Ok(mults)
}

/// Bijection from `BL_k` elements with `len ≡ s (mod k)` and smallest part
/// `1̄` onto partitions into distinct parts `≡ s (mod k)`. The number of
/// distinct parts equals the largest part size of `lam`, which equals its
/// overline count.
pub fn bl_bijection_to_distinct(
    lam: &Overpartition,
    k: usize,
    s: usize,
) -> Result<Partition, SeparableError> {
    if !is_basis_element(lam, BasisFamily::Bl, k) {
        return Err(SeparableError::Precondition(format!("{lam} is not in BL_{k}")));
    }
    check_residue(lam.len(), k, s)?;
    if lam.overlined_at(1) != 1 {
        return Err(SeparableError::Precondition(
            "smallest part must be overlined".into(),
        ));
    }
    staircase_to_distinct(lam, k, s, s)
}

/// Inverse of [`bl_bijection_to_distinct`].
pub fn distinct_to_bl(nu: &Partition, k: usize, s: usize) -> Result<Overpartition, SeparableError> {
    let mults = distinct_to_multiplicities(nu, k, s, s)?;
    let entries = (1..mults.len())
        .rev()
        .map(|t| Entry {
            size: t,
            multiplicity: mults[t],
            overlined: true,
        })
        .collect();
    Ok(Overpartition::from_entries(entries, Convention::LastOccurrence))
}

/// Bijection from `BF_k` elements with `len ≡ s (mod k)` and non-overlined
/// largest part `j` onto partitions into `j` distinct parts `≡ s (mod k)`.
/// Elements with an overlined largest part are mapped by first applying
/// [`toggle_extreme_overline`].
pub fn bf_bijection_to_distinct(
    lam: &Overpartition,
    k: usize,
    s: usize,
) -> Result<Partition, SeparableError> {
    if !is_basis_element(lam, BasisFamily::Bf, k) {
        return Err(SeparableError::Precondition(format!("{lam} is not in BF_{k}")));
    }
    check_residue(lam.len(), k, s)?;
    let j = lam.largest_size().expect("basis elements are nonempty");
    if lam.overlined_at(j) != 0 {
        return Err(SeparableError::Precondition(
            "largest part must not be overlined".into(),
        ));
    }
    staircase_to_distinct(lam, k, s, s)
}

/// Inverse of [`bf_bijection_to_distinct`].
pub fn distinct_to_bf(nu: &Partition, k: usize, s: usize) -> Result<Overpartition, SeparableError> {
    let mults = distinct_to_multiplicities(nu, k, s, s)?;
    let j = mults.len() - 1;
    let entries = (1..=j)
        .rev()
        .map(|t| Entry {
            size: t,
            multiplicity: mults[t],
            overlined: t < j,
        })
        .collect();
    Ok(Overpartition::from_entries(entries, Convention::FirstOccurrence))
}
