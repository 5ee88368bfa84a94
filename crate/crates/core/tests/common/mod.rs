//! Test-side oracles that share no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cdindex_core::{AdPolynomial, BruhatInterval, Permutation};

/// Every `(u, v)` with `u <= v` in `S_n`.
pub fn intervals(n: usize) -> Vec<BruhatInterval> {
    let perms = Permutation::all(n).unwrap();
    let mut out = Vec::new();
    for u in &perms {
        for v in &perms {
            if u.bruhat_leq(v).unwrap() {
                out.push(BruhatInterval::build(*u, *v).unwrap());
            }
        }
    }
    out
}

/// All words over `{c, d}` of degree `n`, with `d` of degree 2.
pub fn cd_words(n: usize) -> Vec<String> {
    match n {
        0 => vec![String::new()],
        1 => vec!["c".into()],
        _ => {
            let mut out: Vec<String> = cd_words(n - 1).into_iter().map(|w| format!("c{w}")).collect();
            out.extend(cd_words(n - 2).into_iter().map(|w| format!("d{w}")));
            out
        }
    }
}

/// `c -> A + D`, `d -> AD + DA`, as a word-count map.
pub fn expand(word: &str) -> BTreeMap<String, i64> {
    let mut acc: BTreeMap<String, i64> = BTreeMap::from([(String::new(), 1)]);
    for ch in word.chars() {
        let parts: &[&str] = if ch == 'c' { &["A", "D"] } else { &["AD", "DA"] };
        let mut next = BTreeMap::new();
        for (w, k) in &acc {
            for p in parts {
                *next.entry(format!("{w}{p}")).or_insert(0) += k;
            }
        }
        acc = next;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Frac(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    fn new(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn sub(self, o: Self) -> Self {
        Frac::new(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Self) -> Self {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
    fn div(self, o: Self) -> Self {
        Frac::new(self.0 * o.1, self.1 * o.0)
    }
}

/// Writes a homogeneous AD-polynomial of degree `n` (as word -> coefficient)
/// in the cd basis by exact elimination. `None` if inconsistent or not
/// integral.
pub fn solve_cd(target: &BTreeMap<String, i64>, n: usize) -> Option<BTreeMap<String, i64>> {
    let basis = cd_words(n);
    let columns: Vec<BTreeMap<String, i64>> = basis.iter().map(|w| expand(w)).collect();
    let rows: BTreeSet<String> = columns
        .iter()
        .flat_map(|c| c.keys().cloned())
        .chain(target.keys().cloned())
        .collect();
    let mut m: Vec<Vec<Frac>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Frac> = columns
                .iter()
                .map(|c| Frac(*c.get(r).unwrap_or(&0) as i128, 1))
                .collect();
            row.push(Frac(*target.get(r).unwrap_or(&0) as i128, 1));
            row
        })
        .collect();
    let cols = basis.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (pivot_row..m.len()).find(|&r| m[r][col].0 != 0) else {
            continue;
        };
        m.swap(pivot_row, p);
        let lead = m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x = x.div(lead);
        }
        for r in 0..m.len() {
            if r != pivot_row && m[r][col].0 != 0 {
                let f = m[r][col];
                for k in 0..=cols {
                    let v = m[pivot_row][k].mul(f);
                    m[r][k] = m[r][k].sub(v);
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| row[cols].0 != 0) {
        return None;
    }
    let mut out = BTreeMap::new();
    for (r, &col) in pivots.iter().enumerate() {
        let v = m[r][cols];
        if v.1 != 1 {
            return None;
        }
        if v.0 != 0 {
            out.insert(basis[col].clone(), v.0 as i64);
        }
    }
    Some(out)
}

pub fn word_map(p: &AdPolynomial) -> BTreeMap<String, i64> {
    p.terms()
        .map(|(m, c)| (if m.is_empty() { String::new() } else { m.to_string() }, *c))
        .collect()
}
