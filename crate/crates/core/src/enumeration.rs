//! Exhaustive generators. These are the brute-force side of every identity
//! check, so they favour obvious correctness over speed.

use std::fmt;
use std::str::FromStr;

use crate::overpartition::{Convention, Entry, Overpartition, Part, Partition};
use crate::separable;

/// Which overpartitions to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    AllOverpartitions,
    /// `L_k`: overlined parts at indices with `len - i ≡ 0 (mod k)`, last-occurrence convention.
    L(usize),
    /// `F_k`: overlined parts at indices with `len - i ≡ -1 (mod k)`, first-occurrence convention.
    F(usize),
}

impl ClassTag {
    pub fn convention(self) -> Convention {
        match self {
            ClassTag::AllOverpartitions | ClassTag::L(_) => Convention::LastOccurrence,
            ClassTag::F(_) => Convention::FirstOccurrence,
        }
    }
}

/// The two bases of the separable classes `L_k` and `F_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisFamily {
    Bl,
    Bf,
}

impl BasisFamily {
    pub fn convention(self) -> Convention {
        match self {
            BasisFamily::Bl => Convention::LastOccurrence,
            BasisFamily::Bf => Convention::FirstOccurrence,
        }
    }

    pub fn class(self, k: usize) -> ClassTag {
        match self {
            BasisFamily::Bl => ClassTag::L(k),
            BasisFamily::Bf => ClassTag::F(k),
        }
    }

    /// Whether the part at distance `d` from the end may be overlined.
    fn may_overline(self, k: usize, d: usize) -> bool {
        match self {
            BasisFamily::Bl => d.is_multiple_of(k),
            BasisFamily::Bf => (d + 1).is_multiple_of(k),
        }
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisFamily::Bl => "BL",
            BasisFamily::Bf => "BF",
        })
    }
}

impl FromStr for BasisFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "BL" => Ok(BasisFamily::Bl),
            "BF" => Ok(BasisFamily::Bf),
            other => Err(format!("unknown basis family {other:?} (expected BL or BF)")),
        }
    }
}

/// Calls `f` with every partition of `n` as `(size, multiplicity)` pairs in
/// decreasing size order.
pub fn for_each_partition_multiplicities(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    fn rec(
        remaining: usize,
        max_size: usize,
        acc: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if remaining == 0 {
            f(acc);
            return;
        }
        for size in (1..=max_size.min(remaining)).rev() {
            for mult in 1..=remaining / size {
                acc.push((size, mult));
                rec(remaining - size * mult, size - 1, acc, f);
                acc.pop();
            }
        }
    }
    let mut acc = Vec::new();
    rec(n, n, &mut acc, &mut f);
}

/// Calls `f` with every overpartition of `n`, in no particular order.
pub fn for_each_overpartition(n: usize, convention: Convention, mut f: impl FnMut(&Overpartition)) {
    for_each_partition_multiplicities(n, |pm| {
        let d = pm.len();
        for mask in 0u64..(1u64 << d) {
            let entries = pm
                .iter()
                .enumerate()
                .map(|(i, &(size, multiplicity))| Entry {
                    size,
                    multiplicity,
                    overlined: mask >> i & 1 == 1,
                })
                .collect();
            f(&Overpartition::from_entries(entries, convention));
        }
    });
}

fn sorted_by_text(mut v: Vec<Overpartition>) -> Vec<Overpartition> {
    let mut keyed: Vec<(String, Overpartition)> = v.drain(..).map(|p| (p.to_string(), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// All overpartitions of `n`, ordered lexicographically by canonical text.
pub fn overpartitions_of(n: usize, convention: Convention) -> Vec<Overpartition> {
    let mut out = Vec::new();
    for_each_overpartition(n, convention, |p| out.push(p.clone()));
    sorted_by_text(out)
}

/// Overpartitions of `n` in the class, ordered by canonical text.
pub fn enumerate_class(n: usize, tag: ClassTag) -> Vec<Overpartition> {
    let mut out = Vec::new();
    for_each_overpartition(n, tag.convention(), |p| {
        if separable::in_class(p, tag) {
            out.push(p.clone());
        }
    });
    sorted_by_text(out)
}

// Grows basis elements from the smallest part upward. `rev_parts[d]` is the
// part at distance d from the end.
fn grow_basis(
    family: BasisFamily,
    k: usize,
    rev_parts: &mut Vec<Part>,
    weight: usize,
    accept: &mut dyn FnMut(&[Part], usize) -> Growth,
) {
    match accept(rev_parts, weight) {
        Growth::Stop => return,
        Growth::Continue => {}
    }
    let d = rev_parts.len();
    let options: Vec<Part> = match rev_parts.last() {
        None => {
            let mut v = vec![Part::plain(1)];
            if family.may_overline(k, 0) {
                v.push(Part::overlined(1));
            }
            v
        }
        Some(prev) => {
            let mut v = Vec::with_capacity(2);
            match family {
                BasisFamily::Bl => {
                    v.push(Part::plain(prev.size));
                    if family.may_overline(k, d) {
                        v.push(Part::overlined(prev.size + 1));
                    }
                }
                BasisFamily::Bf => {
                    let size = prev.size + usize::from(prev.overlined);
                    v.push(Part::plain(size));
                    if family.may_overline(k, d) {
                        v.push(Part::overlined(size));
                    }
                }
            }
            v
        }
    };
    for part in options {
        rev_parts.push(part);
        grow_basis(family, k, rev_parts, weight + part.size, accept);
        rev_parts.pop();
    }
}

enum Growth {
    Continue,
    Stop,
}

fn to_overpartition(rev_parts: &[Part], family: BasisFamily) -> Overpartition {
    let parts: Vec<Part> = rev_parts.iter().rev().copied().collect();
    Overpartition::from_parts(&parts, family.convention())
        .expect("basis growth keeps overlines at convention positions")
}

/// Basis elements of `BL_k` or `BF_k` with exactly `m` parts, ordered by
/// canonical text.
pub fn basis_elements(family: BasisFamily, k: usize, m: usize) -> Vec<Overpartition> {
    assert!(k >= 1, "modulus must be positive");
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    grow_basis(family, k, &mut Vec::new(), 0, &mut |rev, _| {
        if rev.len() == m {
            out.push(to_overpartition(rev, family));
            Growth::Stop
        } else {
            Growth::Continue
        }
    });
    sorted_by_text(out)
}

/// Basis elements of `BL_k` or `BF_k` of weight exactly `n` (any length),
/// ordered by canonical text.
pub fn basis_elements_of_weight(family: BasisFamily, k: usize, n: usize) -> Vec<Overpartition> {
    assert!(k >= 1, "modulus must be positive");
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    grow_basis(family, k, &mut Vec::new(), 0, &mut |rev, w| {
        if w > n {
            return Growth::Stop;
        }
        if w == n && !rev.is_empty() {
            out.push(to_overpartition(rev, family));
            return Growth::Stop;
        }
        Growth::Continue
    });
    sorted_by_text(out)
}

/// Partitions of `n` into exactly `j` distinct parts, each `≡ s (mod k)`,
/// in decreasing lexicographic order.
pub fn distinct_congruent_partitions(n: usize, j: usize, k: usize, s: usize) -> Vec<Partition> {
    assert!(k >= 1 && (1..=k).contains(&s), "need 1 <= s <= k");
    fn rec(
        remaining: usize,
        parts_left: usize,
        max_part: usize,
        k: usize,
        s: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if parts_left == 0 {
            if remaining == 0 {
                out.push(Partition::new(acc.clone()).expect("decreasing"));
            }
            return;
        }
        // candidates: s, s + k, ... up to min(max_part, remaining)
        let top = max_part.min(remaining);
        if top < s {
            return;
        }
        let mut part = s + (top - s) / k * k;
        loop {
            acc.push(part);
            rec(remaining - part, parts_left - 1, part.saturating_sub(1), k, s, acc, out);
            acc.pop();
            if part < s + k {
                break;
            }
            part -= k;
        }
    }
    let mut out = Vec::new();
    if j == 0 {
        if n == 0 {
            out.push(Partition::default());
        }
        return out;
    }
    rec(n, j, n, k, s, &mut Vec::new(), &mut out);
    out
}
