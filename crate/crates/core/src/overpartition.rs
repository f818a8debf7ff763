//! Overpartitions and the statistics defined on them.
//!
//! An [`Overpartition`] is stored as a size-indexed table of
//! `(multiplicity, overlined)` entries, independent of which occurrence of a
//! size carries the overline. The [`Convention`] tag only decides where the
//! overline sits when the parts are laid out as a sequence, which matters for
//! rendering, for conjugation and for the positional class tests.
//!
//! Text format: sizes in non-increasing order separated by `,`, with a `~`
//! suffix on the overlined part, e.g. `3,1~` for (3, 1̄). The empty string is
//! the empty overpartition.

use std::fmt;

use thiserror::Error;

/// Which occurrence of a repeated size may carry the overline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Convention {
    #[default]
    LastOccurrence,
    FirstOccurrence,
}

/// One part of an overpartition laid out as a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Part {
    pub size: usize,
    pub overlined: bool,
}

impl Part {
    pub fn plain(size: usize) -> Self {
        Part {
            size,
            overlined: false,
        }
    }

    pub fn overlined(size: usize) -> Self {
        Part {
            size,
            overlined: true,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.overlined {
            write!(f, "{}~", self.size)
        } else {
            write!(f, "{}", self.size)
        }
    }
}

/// All parts of one size: `multiplicity` parts, one of which is overlined
/// when `overlined` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub size: usize,
    pub multiplicity: usize,
    pub overlined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid token {0:?}: expected a positive integer optionally followed by '~'")]
    InvalidToken(String),
    #[error("part sizes must be positive, found {0:?}")]
    NonPositive(String),
    #[error("sizes must be non-increasing, found {next} after {prev}")]
    Increasing { prev: usize, next: usize },
    #[error("size {0} is overlined more than once")]
    DuplicateOverline(usize),
    #[error("overlined part of size {0} is not at the position required by the convention")]
    MisplacedOverline(usize),
}

/// An overpartition: a partition in which one occurrence of each size may be
/// overlined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Overpartition {
    // strictly decreasing sizes, multiplicity >= 1
    entries: Vec<Entry>,
    convention: Convention,
}

/// Whether a size comparison is `>` or `>=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Strict,
    Inclusive,
}

impl Overpartition {
    pub fn empty(convention: Convention) -> Self {
        Overpartition {
            entries: Vec::new(),
            convention,
        }
    }

    /// Builds an overpartition from `(size, multiplicity, overlined)` entries
    /// given in strictly decreasing size order. Sizes and multiplicities must
    /// be positive; this is checked with debug assertions only.
    pub fn from_entries(entries: Vec<Entry>, convention: Convention) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].size > w[1].size));
        debug_assert!(entries.iter().all(|e| e.size > 0 && e.multiplicity > 0));
        Overpartition {
            entries,
            convention,
        }
    }

    /// Builds an overpartition from a laid-out part sequence. The overlined
    /// part of each size must sit where `convention` puts it.
    pub fn from_parts(parts: &[Part], convention: Convention) -> Result<Self, ParseError> {
        let entries = group_parts(parts, convention, true)?;
        Ok(Overpartition {
            entries,
            convention,
        })
    }

    /// Parses the comma-separated text format. An overline written on any
    /// occurrence of a size is moved to the occurrence the convention selects.
    pub fn parse(text: &str, convention: Convention) -> Result<Self, ParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Overpartition::empty(convention));
        }
        let parts = text
            .split(',')
            .map(parse_token)
            .collect::<Result<Vec<_>, _>>()?;
        let entries = group_parts(&parts, convention, false)?;
        Ok(Overpartition {
            entries,
            convention,
        })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// The same parts read under another convention.
    pub fn with_convention(&self, convention: Convention) -> Self {
        Overpartition {
            entries: self.entries.clone(),
            convention,
        }
    }

    /// Entries in strictly decreasing size order.
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().map(|e| e.size * e.multiplicity).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn overlined_count(&self) -> usize {
        self.entries.iter().filter(|e| e.overlined).count()
    }

    pub fn largest_size(&self) -> Option<usize> {
        self.entries.first().map(|e| e.size)
    }

    pub fn smallest_size(&self) -> Option<usize> {
        self.entries.last().map(|e| e.size)
    }

    fn entry(&self, size: usize) -> Option<&Entry> {
        self.entries
            .binary_search_by(|e| size.cmp(&e.size))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Number of parts of size `size`, overlined or not.
    pub fn count_of_size(&self, size: usize) -> usize {
        self.entry(size).map_or(0, |e| e.multiplicity)
    }

    /// Number of non-overlined parts equal to `size`.
    pub fn plain_count(&self, size: usize) -> usize {
        self.entry(size)
            .map_or(0, |e| e.multiplicity - usize::from(e.overlined))
    }

    /// Number of overlined parts of size `size` (0 or 1).
    pub fn overlined_at(&self, size: usize) -> usize {
        self.entry(size).map_or(0, |e| usize::from(e.overlined))
    }

    pub fn has_size(&self, size: usize) -> bool {
        self.entry(size).is_some()
    }

    /// Parts in non-increasing order with each overline placed per the
    /// convention.
    pub fn parts(&self) -> Vec<Part> {
        let mut out = Vec::with_capacity(self.len());
        for e in &self.entries {
            for idx in 0..e.multiplicity {
                let at_mark = match self.convention {
                    Convention::FirstOccurrence => idx == 0,
                    Convention::LastOccurrence => idx + 1 == e.multiplicity,
                };
                out.push(Part {
                    size: e.size,
                    overlined: e.overlined && at_mark,
                });
            }
        }
        out
    }

    /// Conjugate overpartition. Conjugation is defined on the last-occurrence
    /// layout, so the parts are read under that convention whatever the tag,
    /// and the result is tagged `LastOccurrence`.
    pub fn conjugate(&self) -> Overpartition {
        let parts = self.with_convention(Convention::LastOccurrence).parts();
        let len = parts.len();
        // size t of the conjugate has |pi_t| - |pi_{t+1}| parts (|pi_{l+1}| = 0)
        let mut entries = Vec::new();
        for t in (1..=len).rev() {
            let next = if t < len { parts[t].size } else { 0 };
            let count = parts[t - 1].size - next;
            let overlined = parts[t - 1].overlined;
            if count > 0 {
                entries.push(Entry {
                    size: t,
                    multiplicity: count,
                    overlined,
                });
            } else {
                debug_assert!(!overlined, "overlined part that is not a last occurrence");
            }
        }
        Overpartition {
            entries,
            convention: Convention::LastOccurrence,
        }
    }

    /// `r`-chain minimal excludant size: the least positive `t` such that no
    /// part has size in `t..t + r`.
    pub fn mes(&self, r: usize) -> usize {
        assert!(r >= 1, "chain length must be positive");
        let mut t = 1;
        for e in self.entries.iter().rev() {
            if e.size >= t + r {
                break;
            }
            if e.size >= t {
                t = e.size + 1;
            }
        }
        t
    }

    /// `r`-chain maximal excludant size: the largest `t` with
    /// `r <= t < largest size` such that no part has size in `t - r + 1..=t`,
    /// or 0 when there is none.
    pub fn maes(&self, r: usize) -> usize {
        assert!(r >= 1, "chain length must be positive");
        let Some(largest) = self.largest_size() else {
            return 0;
        };
        // entries are decreasing; the window just below each present size is a
        // run of absent sizes
        let mut upper = largest; // first size above the current gap
        for e in self.entries.iter().skip(1) {
            if let Some(t) = gap_top(e.size, upper, r) {
                return t;
            }
            upper = e.size;
        }
        gap_top(0, upper, r).unwrap_or(0)
    }

    /// Largest `j >= 0` such that `j = 0` or at least `r + 1` parts have size `j`.
    pub fn largest_repeating_size(&self, r: usize) -> usize {
        self.entries
            .iter()
            .find(|e| e.multiplicity > r)
            .map_or(0, |e| e.size)
    }

    /// Smallest positive size with at least `r + 1` parts, if any.
    pub fn smallest_positive_repeating_size(&self, r: usize) -> Option<usize> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.multiplicity > r)
            .map(|e| e.size)
    }

    /// Number of parts of size `> t` (`Bound::Strict`) or `>= t`
    /// (`Bound::Inclusive`).
    pub fn parts_of_size_above(&self, t: usize, bound: Bound) -> usize {
        self.entries
            .iter()
            .take_while(|e| match bound {
                Bound::Strict => e.size > t,
                Bound::Inclusive => e.size >= t,
            })
            .map(|e| e.multiplicity)
            .sum()
    }
}

// Largest t in the absent run (lower, upper) exclusive with t >= r and
// t - r + 1 > lower.
fn gap_top(lower: usize, upper: usize, r: usize) -> Option<usize> {
    if upper == 0 {
        return None;
    }
    let t = upper - 1;
    if t >= r && t >= lower + r && t > lower {
        Some(t)
    } else {
        None
    }
}

fn parse_token(token: &str) -> Result<Part, ParseError> {
    let token = token.trim();
    let (digits, overlined) = match token.strip_suffix('~') {
        Some(d) => (d, true),
        None => (token, false),
    };
    if digits.starts_with('-') && digits.len() > 1 && digits[1..].bytes().all(|b| b.is_ascii_digit())
    {
        return Err(ParseError::NonPositive(token.to_string()));
    }
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::InvalidToken(token.to_string()));
    }
    let size: usize = digits
        .parse()
        .map_err(|_| ParseError::InvalidToken(token.to_string()))?;
    if size == 0 {
        return Err(ParseError::NonPositive(token.to_string()));
    }
    Ok(Part { size, overlined })
}

fn group_parts(
    parts: &[Part],
    convention: Convention,
    strict_position: bool,
) -> Result<Vec<Entry>, ParseError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, part) in parts.iter().enumerate() {
        if part.size == 0 {
            return Err(ParseError::NonPositive(part.to_string()));
        }
        match entries.last_mut() {
            Some(last) if last.size == part.size => {
                if part.overlined {
                    if last.overlined {
                        return Err(ParseError::DuplicateOverline(part.size));
                    }
                    last.overlined = true;
                }
                last.multiplicity += 1;
            }
            Some(last) if last.size < part.size => {
                return Err(ParseError::Increasing {
                    prev: last.size,
                    next: part.size,
                });
            }
            _ => entries.push(Entry {
                size: part.size,
                multiplicity: 1,
                overlined: part.overlined,
            }),
        }
        if strict_position && part.overlined {
            let first = idx == 0 || parts[idx - 1].size != part.size;
            let last = idx + 1 == parts.len() || parts[idx + 1].size != part.size;
            let ok = match convention {
                Convention::FirstOccurrence => first,
                Convention::LastOccurrence => last,
            };
            if !ok {
                return Err(ParseError::MisplacedOverline(part.size));
            }
        }
    }
    Ok(entries)
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

/// An ordinary partition, parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Returns `None` unless `parts` is non-increasing and positive.
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition { parts })
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The i-th part of the conjugate counts parts `>= i`.
    pub fn conjugate(&self) -> Partition {
        let largest = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=largest)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
