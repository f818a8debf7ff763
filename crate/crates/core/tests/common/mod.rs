//! Reference implementations written directly from the definitions, sharing
//! no code with the library beyond parsing its text output.
#![allow(dead_code)]

use qpl::{Convention, Overpartition};

/// One laid-out part: `(size, overlined)`.
pub type RawPart = (usize, bool);

/// Partitions of `n` as non-increasing part lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Overpartitions of `n` laid out with the overline on the last (or first)
/// occurrence of a size.
pub fn raw_overpartitions(n: usize, last: bool) -> Vec<Vec<RawPart>> {
    let mut out = Vec::new();
    for p in partitions(n) {
        let marks: Vec<usize> = (0..p.len())
            .filter(|&i| {
                if last {
                    i + 1 == p.len() || p[i + 1] != p[i]
                } else {
                    i == 0 || p[i - 1] != p[i]
                }
            })
            .collect();
        for mask in 0u32..(1 << marks.len()) {
            let mut raw: Vec<RawPart> = p.iter().map(|&s| (s, false)).collect();
            for (b, &i) in marks.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    raw[i].1 = true;
                }
            }
            out.push(raw);
        }
    }
    out
}

pub fn text(raw: &[RawPart]) -> String {
    raw.iter()
        .map(|&(s, o)| if o { format!("{s}~") } else { s.to_string() })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn to_lib(raw: &[RawPart], convention: Convention) -> Overpartition {
    Overpartition::parse(&text(raw), convention).unwrap()
}

pub fn from_lib(pi: &Overpartition) -> Vec<RawPart> {
    pi.parts().iter().map(|p| (p.size, p.overlined)).collect()
}

fn has_size(raw: &[RawPart], t: usize) -> bool {
    raw.iter().any(|&(s, _)| s == t)
}

pub fn mes(raw: &[RawPart], r: usize) -> usize {
    (1..)
        .find(|&t| (t..t + r).all(|u| !has_size(raw, u)))
        .unwrap()
}

pub fn maes(raw: &[RawPart], r: usize) -> usize {
    let largest = raw.first().map_or(0, |p| p.0);
    (r..largest)
        .rev()
        .find(|&t| (t + 1 - r..=t).all(|u| !has_size(raw, u)))
        .unwrap_or(0)
}

pub fn multiplicity(raw: &[RawPart], t: usize) -> usize {
    raw.iter().filter(|&&(s, _)| s == t).count()
}

/// Largest size occurring at least `r + 1` times, 0 if none.
pub fn lrs(raw: &[RawPart], r: usize) -> usize {
    raw.iter()
        .map(|p| p.0)
        .filter(|&t| multiplicity(raw, t) > r)
        .max()
        .unwrap_or(0)
}

pub fn sprs(raw: &[RawPart], r: usize) -> Option<usize> {
    raw.iter()
        .map(|p| p.0)
        .filter(|&t| multiplicity(raw, t) > r)
        .min()
}

pub fn parts_greater(raw: &[RawPart], t: usize) -> usize {
    raw.iter().filter(|&&(s, _)| s > t).count()
}

pub fn parts_at_least(raw: &[RawPart], t: usize) -> usize {
    raw.iter().filter(|&&(s, _)| s >= t).count()
}

pub fn overlined(raw: &[RawPart]) -> usize {
    raw.iter().filter(|p| p.1).count()
}

pub fn weight(raw: &[RawPart]) -> usize {
    raw.iter().map(|p| p.0).sum()
}

/// Conjugate from the defining multiplicities: size `t` occurs
/// `|pi_t| - |pi_{t+1}|` times and is overlined iff `pi_t` is.
pub fn conjugate(raw: &[RawPart]) -> Vec<RawPart> {
    let l = raw.len();
    let mut out = Vec::new();
    for t in (1..=l).rev() {
        let next = if t < l { raw[t].0 } else { 0 };
        let count = raw[t - 1].0 - next;
        for c in 0..count {
            out.push((t, raw[t - 1].1 && c + 1 == count));
        }
    }
    out
}

/// `L_k` (or `F_k`) membership by the positional rule on the given layout.
pub fn positional_member(raw: &[RawPart], k: usize, l_class: bool) -> bool {
    let len = raw.len();
    raw.iter().enumerate().filter(|(_, p)| p.1).all(|(idx, _)| {
        let d = len - (idx + 1);
        if l_class {
            d.is_multiple_of(k)
        } else {
            d % k == k - 1
        }
    })
}

/// Basis elements with `m` parts, generated bottom-up from the defining
/// inequalities, the overline layout and the positional class rule.
pub fn basis(l_family: bool, k: usize, m: usize) -> Vec<Vec<RawPart>> {
    let mut out = Vec::new();
    let bottoms: Vec<RawPart> = if l_family || k == 1 {
        vec![(1, false), (1, true)]
    } else {
        vec![(1, false)]
    };
    fn grow(l_family: bool, k: usize, m: usize, cur: &mut Vec<RawPart>, out: &mut Vec<Vec<RawPart>>) {
        if cur.len() == m {
            let mut v = cur.clone();
            v.reverse();
            out.push(v);
            return;
        }
        let below = *cur.last().unwrap();
        for size in [below.0, below.0 + 1] {
            for o in [false, true] {
                let strict = if l_family { !o } else { !below.1 };
                let ok = if strict {
                    size < below.0 + 1
                } else {
                    size <= below.0 + 1
                };
                let d = cur.len();
                let position_ok = !o || if l_family { d.is_multiple_of(k) } else { d % k == k - 1 };
                let layout_ok = if l_family {
                    !o || size != below.0
                } else {
                    !below.1 || size != below.0
                };
                if ok && position_ok && layout_ok {
                    cur.push((size, o));
                    grow(l_family, k, m, cur, out);
                    cur.pop();
                }
            }
        }
    }
    for b in bottoms {
        grow(l_family, k, m, &mut vec![b], &mut out);
    }
    out.into_iter()
        .filter(|raw| layout_valid(raw, l_family) && positional_member(raw, k, l_family))
        .collect()
}

/// Each size carries at most one overline, placed on its last (or first)
/// occurrence.
pub fn layout_valid(raw: &[RawPart], last: bool) -> bool {
    raw.iter().enumerate().all(|(i, &(s, o))| {
        if !o {
            return true;
        }
        if last {
            i + 1 == raw.len() || raw[i + 1].0 != s
        } else {
            i == 0 || raw[i - 1].0 != s
        }
    })
}

/// Partitions of `n` into exactly `j` distinct parts congruent to `s` mod `k`,
/// for `1 <= s <= k`.
pub fn distinct_congruent(n: usize, j: usize, k: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, j: usize, max: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut p = s;
        let mut cands = Vec::new();
        while p <= rest && p < max {
            cands.push(p);
            p += k;
        }
        for &p in cands.iter().rev() {
            cur.push(p);
            go(rest - p, j - 1, p, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, j, usize::MAX, k, s, &mut Vec::new(), &mut out);
    out
}

/// All ways to write `pi` as a basis element plus a non-increasing padding,
/// found by trying every basis element of the right length.
pub fn all_decompositions(pi: &[RawPart], l_family: bool, k: usize) -> Vec<(Vec<RawPart>, Vec<usize>)> {
    basis(l_family, k, pi.len())
        .into_iter()
        .filter_map(|lam| {
            let mut pad = Vec::with_capacity(pi.len());
            for (p, l) in pi.iter().zip(&lam) {
                if p.1 != l.1 || p.0 < l.0 {
                    return None;
                }
                pad.push(p.0 - l.0);
            }
            if pad.windows(2).any(|w| w[0] < w[1]) {
                return None;
            }
            Some((lam, pad))
        })
        .collect()
}

/// Truncated integer power series helpers on `Vec<i128>` of length `n + 1`.
pub fn pmul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().min(b.len());
    let mut out = vec![0i128; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pinv(a: &[i128]) -> Vec<i128> {
    assert_eq!(a[0], 1);
    let n = a.len();
    let mut out = vec![0i128; n];
    out[0] = 1;
    for d in 1..n {
        out[d] = -(1..=d).map(|i| a[i] * out[d - i]).sum::<i128>();
    }
    out
}

/// `prod_{i>=1} (1 + q^i) / (1 - q^i)` to `q^n`.
pub fn overpartition_counts(n: usize) -> Vec<i128> {
    let mut num = vec![0i128; n + 1];
    num[0] = 1;
    let mut den = num.clone();
    for i in 1..=n {
        let mut f = vec![0i128; n + 1];
        f[0] = 1;
        f[i] = 1;
        num = pmul(&num, &f);
        f[i] = -1;
        den = pmul(&den, &f);
    }
    pmul(&num, &pinv(&den))
}

/// Sum of `stat` over the overpartitions of each weight up to `n`.
pub fn sigma(n: usize, stat: impl Fn(&[RawPart]) -> usize) -> Vec<i128> {
    (0..=n)
        .map(|w| raw_overpartitions(w, true).iter().map(|p| stat(p) as i128).sum())
        .collect()
}
