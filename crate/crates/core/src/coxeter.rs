//! Symmetric groups as Coxeter systems: permutations, reflections, length,
//! Bruhat comparison and reflection orders.
//!
//! Permutations are stored in one-line notation with 1-based values. The
//! product `p * q` applies `q` first, so `(p * q)(k) = p(q(k))`, and right
//! multiplication by the transposition `(i j)` swaps positions `i` and `j`
//! of the one-line word.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported rank. Everything beyond S_8 is far out of reach anyway.
pub const MAX_RANK: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("rank mismatch: S_{left} vs S_{right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank {0} is outside the supported range 1..={max}", max = MAX_RANK)]
    UnsupportedRank(usize),
    #[error("not a permutation in one-line notation: {0:?}")]
    InvalidPermutation(String),
    #[error("invalid reflection {0:?}")]
    InvalidReflection(String),
    #[error("reflection sequence for S_{n} is not a permutation of its {expected} transpositions")]
    IncompleteOrder { n: usize, expected: usize },
    #[error("word {word:?} is not a reduced word for the longest element of S_{n}")]
    NotLongestWord { n: usize, word: Vec<usize> },
    #[error("generator index {index} out of range for S_{n}")]
    BadGenerator { n: usize, index: usize },
    #[error("{0}")]
    DihedralViolation(DihedralViolation),
}

/// An element of S_n in one-line notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: u8,
    image: [u8; MAX_RANK],
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self, CoxeterError> {
        check_rank(n)?;
        let mut image = [0u8; MAX_RANK];
        for (k, slot) in image.iter_mut().enumerate().take(n) {
            *slot = (k + 1) as u8;
        }
        Ok(Self { n: n as u8, image })
    }

    /// The longest element `n (n-1) ... 1`.
    pub fn longest(n: usize) -> Result<Self, CoxeterError> {
        check_rank(n)?;
        let mut image = [0u8; MAX_RANK];
        for (k, slot) in image.iter_mut().enumerate().take(n) {
            *slot = (n - k) as u8;
        }
        Ok(Self { n: n as u8, image })
    }

    pub fn from_one_line(values: &[usize]) -> Result<Self, CoxeterError> {
        let n = values.len();
        check_rank(n)?;
        let mut seen = [false; MAX_RANK + 1];
        let mut image = [0u8; MAX_RANK];
        for (k, &value) in values.iter().enumerate() {
            if value == 0 || value > n || seen[value] {
                return Err(CoxeterError::InvalidPermutation(format!("{values:?}")));
            }
            seen[value] = true;
            image[k] = value as u8;
        }
        Ok(Self { n: n as u8, image })
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    /// The one-line word `p(1) p(2) ... p(n)`.
    pub fn one_line(&self) -> &[u8] {
        &self.image[..self.rank()]
    }

    /// `p(k)` for `1 <= k <= n`.
    pub fn apply(&self, k: usize) -> usize {
        self.image[k - 1] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut image = [0u8; MAX_RANK];
        for (k, &value) in self.one_line().iter().enumerate() {
            image[value as usize - 1] = (k + 1) as u8;
        }
        Self { n: self.n, image }
    }

    /// `self * other`, applying `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, CoxeterError> {
        same_rank(self, other)?;
        let mut image = [0u8; MAX_RANK];
        for (k, &value) in other.one_line().iter().enumerate() {
            image[k] = self.image[value as usize - 1];
        }
        Ok(Self { n: self.n, image })
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = self.one_line();
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Right multiplication by a reflection: swaps positions `t.i` and `t.j`.
    pub fn mul_reflection(&self, t: Reflection) -> Self {
        debug_assert!(t.j as usize <= self.rank());
        let mut image = self.image;
        image.swap(t.i as usize - 1, t.j as usize - 1);
        Self { n: self.n, image }
    }

    /// Bruhat comparison `self <= other` by the rank-matrix criterion:
    /// for every prefix `1..=i` and threshold `k`, `self` has at most as many
    /// values `>= k` in the prefix as `other`.
    pub fn bruhat_leq(&self, other: &Self) -> Result<bool, CoxeterError> {
        same_rank(self, other)?;
        let n = self.rank();
        let mut mine = [0u8; MAX_RANK + 2];
        let mut theirs = [0u8; MAX_RANK + 2];
        for i in 0..n {
            for k in 1..=self.image[i] as usize {
                mine[k] += 1;
            }
            for k in 1..=other.image[i] as usize {
                theirs[k] += 1;
            }
            if (1..=n).any(|k| mine[k] > theirs[k]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// If `self ≺ other` in the Bruhat graph, the reflection `t = self⁻¹ other`.
    pub fn edge_to(&self, other: &Self) -> Option<Reflection> {
        if self.n != other.n {
            return None;
        }
        let diff: Vec<usize> = (0..self.rank())
            .filter(|&k| self.image[k] != other.image[k])
            .collect();
        match diff.as_slice() {
            &[a, b] if self.image[a] == other.image[b] && self.image[b] == other.image[a] => {
                (self.length() < other.length())
                    .then(|| Reflection::new(a + 1, b + 1).expect("distinct positions"))
            }
            _ => None,
        }
    }

    /// All elements of S_n in lexicographic one-line order.
    pub fn all(n: usize) -> Result<Vec<Self>, CoxeterError> {
        let mut current = Self::identity(n)?;
        let mut out = vec![current];
        while let Some(next) = current.next_lexicographic() {
            out.push(next);
            current = next;
        }
        Ok(out)
    }

    fn next_lexicographic(&self) -> Option<Self> {
        let n = self.rank();
        let mut w = self.image;
        let i = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1])?;
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i])?;
        w.swap(i, j);
        w[i + 1..n].reverse();
        Some(Self { n: self.n, image: w })
    }
}

fn check_rank(n: usize) -> Result<(), CoxeterError> {
    if n == 0 || n > MAX_RANK {
        Err(CoxeterError::UnsupportedRank(n))
    } else {
        Ok(())
    }
}

fn same_rank(p: &Permutation, q: &Permutation) -> Result<(), CoxeterError> {
    if p.n == q.n {
        Ok(())
    } else {
        Err(CoxeterError::RankMismatch {
            left: p.rank(),
            right: q.rank(),
        })
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rank first, then one-line words lexicographically. This is a display and
/// storage order only, not the Bruhat order.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.one_line().cmp(other.one_line()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() < 10 {
            for v in self.one_line() {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"2134"`, or a comma separated list such as `"2,1,3,4"`.
impl FromStr for Permutation {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || CoxeterError::InvalidPermutation(s.to_string());
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|part| part.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        Self::from_one_line(&values).map_err(|_| bad())
    }
}

/// The transposition swapping `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reflection {
    i: u8,
    j: u8,
}

impl Reflection {
    pub fn new(a: usize, b: usize) -> Result<Self, CoxeterError> {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == 0 || i == j || j > MAX_RANK {
            return Err(CoxeterError::InvalidReflection(format!("({a} {b})")));
        }
        Ok(Self {
            i: i as u8,
            j: j as u8,
        })
    }

    pub fn i(&self) -> usize {
        self.i as usize
    }

    pub fn j(&self) -> usize {
        self.j as usize
    }

    pub fn to_permutation(&self, n: usize) -> Result<Permutation, CoxeterError> {
        if self.j() > n {
            return Err(CoxeterError::InvalidReflection(self.to_string()));
        }
        Ok(Permutation::identity(n)?.mul_reflection(*self))
    }

    /// `s t s` for reflections `s`, `t`: the transposition of `s(i), s(j)`.
    pub fn conjugate_by(&self, s: Reflection) -> Reflection {
        let swap = |k: u8| {
            if k == s.i {
                s.j
            } else if k == s.j {
                s.i
            } else {
                k
            }
        };
        Reflection::new(swap(self.i) as usize, swap(self.j) as usize).expect("conjugate")
    }

    fn disjoint(&self, other: &Reflection) -> bool {
        self.i != other.i && self.i != other.j && self.j != other.i && self.j != other.j
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.i, self.j)
    }
}

impl fmt::Debug for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"(1 3)"`, `"(1,3)"`, `"1 3"` and, for single digits, `"(13)"`.
impl FromStr for Reflection {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoxeterError::InvalidReflection(s.to_string());
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect();
        let (a, b) = match parts.as_slice() {
            [a, b] => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
            [ab] if ab.len() == 2 => {
                let mut digits = ab.chars().map(|c| c.to_digit(10).map(|d| d as usize));
                (
                    digits.next().flatten().ok_or_else(bad)?,
                    digits.next().flatten().ok_or_else(bad)?,
                )
            }
            _ => return Err(bad()),
        };
        Reflection::new(a, b).map_err(|_| bad())
    }
}

/// All C(n,2) transpositions of S_n, ordered by `(i, j)`.
pub fn all_reflections(n: usize) -> Vec<Reflection> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Reflection::new(i, j).expect("i < j"));
        }
    }
    out
}

/// A dihedral reflection subgroup on which an order fails to restrict to
/// its canonical chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DihedralViolation {
    /// The reflections of the subgroup, in the order under test.
    pub restricted: Vec<Reflection>,
    /// The canonical chain starting from the first canonical generator.
    pub canonical: Vec<Reflection>,
}

impl fmt::Display for DihedralViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dihedral condition fails: order restricts to {:?}, expected {:?} or its reverse",
            self.restricted, self.canonical
        )
    }
}

/// A total order on the reflections of S_n.
///
/// Ranks are 1-based, matching the usual convention of labelling Bruhat
/// graph edges by the position of their reflection in the order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ReflectionOrder {
    n: usize,
    sequence: Vec<Reflection>,
    ranks: Vec<u16>,
}

impl ReflectionOrder {
    /// Builds an order from an explicit sequence. Only checks that every
    /// transposition appears exactly once; see [`ReflectionOrder::validate`]
    /// for the dihedral condition.
    pub fn from_sequence(n: usize, sequence: Vec<Reflection>) -> Result<Self, CoxeterError> {
        check_rank(n)?;
        let expected = n * (n - 1) / 2;
        let incomplete = || CoxeterError::IncompleteOrder { n, expected };
        if sequence.len() != expected {
            return Err(incomplete());
        }
        let mut ranks = vec![0u16; (n + 1) * (n + 1)];
        for (pos, t) in sequence.iter().enumerate() {
            if t.j() > n {
                return Err(incomplete());
            }
            let slot = &mut ranks[t.i() * (n + 1) + t.j()];
            if *slot != 0 {
                return Err(incomplete());
            }
            *slot = (pos + 1) as u16;
        }
        Ok(Self { n, sequence, ranks })
    }

    /// Like [`ReflectionOrder::from_sequence`] but also rejects sequences
    /// that violate the dihedral condition.
    pub fn new(n: usize, sequence: Vec<Reflection>) -> Result<Self, CoxeterError> {
        let order = Self::from_sequence(n, sequence)?;
        order.validate().map_err(CoxeterError::DihedralViolation)?;
        Ok(order)
    }

    /// `(12) < (13) < ... < (1n) < (23) < ... < (n-1 n)`.
    pub fn lex(n: usize) -> Result<Self, CoxeterError> {
        check_rank(n)?;
        Self::from_sequence(n, all_reflections(n))
    }

    /// The order `t_k = s_{i_1} ... s_{i_{k-1}} s_{i_k} s_{i_{k-1}} ... s_{i_1}`
    /// attached to a reduced word `i_1 ... i_N` of the longest element, where
    /// `s_i = (i i+1)`.
    pub fn from_reduced_word(n: usize, word: &[usize]) -> Result<Self, CoxeterError> {
        check_rank(n)?;
        let not_longest = || CoxeterError::NotLongestWord {
            n,
            word: word.to_vec(),
        };
        if word.len() != n * (n - 1) / 2 {
            return Err(not_longest());
        }
        let mut prefix = Permutation::identity(n)?;
        let mut sequence = Vec::with_capacity(word.len());
        for &s in word {
            if s == 0 || s >= n {
                return Err(CoxeterError::BadGenerator { n, index: s });
            }
            sequence.push(Reflection::new(prefix.apply(s), prefix.apply(s + 1))?);
            let next = prefix.mul_reflection(Reflection::new(s, s + 1)?);
            if next.length() != prefix.length() + 1 {
                return Err(not_longest());
            }
            prefix = next;
        }
        Self::from_sequence(n, sequence)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn sequence(&self) -> &[Reflection] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// 1-based position of `t`. Panics if `t` is not a reflection of S_n.
    pub fn rank_of(&self, t: Reflection) -> usize {
        let r = self.ranks[t.i() * (self.n + 1) + t.j()];
        assert!(r != 0, "{t} is not a reflection of S_{}", self.n);
        r as usize
    }

    /// The reflection at 1-based position `rank`.
    pub fn at(&self, rank: usize) -> Option<Reflection> {
        rank.checked_sub(1).and_then(|k| self.sequence.get(k)).copied()
    }

    pub fn first(&self) -> Option<Reflection> {
        self.sequence.first().copied()
    }

    pub fn last(&self) -> Option<Reflection> {
        self.sequence.last().copied()
    }

    pub fn compare(&self, a: Reflection, b: Reflection) -> Ordering {
        self.rank_of(a).cmp(&self.rank_of(b))
    }

    pub fn reverse(&self) -> Self {
        let mut sequence = self.sequence.clone();
        sequence.reverse();
        Self::from_sequence(self.n, sequence).expect("reversal keeps every reflection")
    }

    /// Checks the dihedral condition on every reflection subgroup generated
    /// by two reflections. Pairs are visited in order of their positions and
    /// the first failing subgroup is returned.
    pub fn validate(&self) -> Result<(), DihedralViolation> {
        for (pos, &a) in self.sequence.iter().enumerate() {
            for &b in &self.sequence[pos + 1..] {
                let mut subgroup = dihedral_closure(a, b);
                subgroup.sort_by_key(|&t| self.rank_of(t));
                let (alpha, beta) = canonical_generators(&subgroup);
                let forward = canonical_chain(alpha, beta, subgroup.len());
                let mut backward = forward.clone();
                backward.reverse();
                if subgroup != forward && subgroup != backward {
                    return Err(DihedralViolation {
                        restricted: subgroup,
                        canonical: forward,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

impl fmt::Debug for ReflectionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sequence.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

/// Reflections of the subgroup generated by `a` and `b`: close the pair
/// under mutual conjugation.
fn dihedral_closure(a: Reflection, b: Reflection) -> Vec<Reflection> {
    let mut set = vec![a, b];
    let mut grew = true;
    while grew {
        grew = false;
        for x in 0..set.len() {
            for y in 0..set.len() {
                let c = set[x].conjugate_by(set[y]);
                if !set.contains(&c) {
                    set.push(c);
                    grew = true;
                }
            }
        }
    }
    set
}

/// The two reflections of a dihedral subsystem whose positive roots are
/// simple. `(i k)` has root `e_i - e_k`, which decomposes as
/// `(e_i - e_j) + (e_j - e_k)` exactly when `(i j)` and `(j k)` are present.
fn canonical_generators(subgroup: &[Reflection]) -> (Reflection, Reflection) {
    let decomposable = |t: &Reflection| {
        subgroup.iter().any(|s| {
            s.i == t.i
                && s.j < t.j
                && subgroup.contains(&Reflection { i: s.j, j: t.j })
        })
    };
    let simple: Vec<Reflection> = subgroup.iter().filter(|t| !decomposable(t)).copied().collect();
    debug_assert_eq!(simple.len(), 2, "rank-two subsystem {subgroup:?}");
    (simple[0], simple[1])
}

/// `alpha, alpha beta alpha, (alpha beta)^2 alpha, ...` up to `len` terms.
fn canonical_chain(alpha: Reflection, beta: Reflection, len: usize) -> Vec<Reflection> {
    if len == 2 && alpha.disjoint(&beta) {
        return vec![alpha, beta];
    }
    // t_1 = a, t_2 = aba, and t_{k+2} = (ab) t_k (ab)^{-1}.
    let mut chain = vec![alpha, beta.conjugate_by(alpha)];
    while chain.len() < len {
        let next = chain[chain.len() - 2].conjugate_by(beta).conjugate_by(alpha);
        chain.push(next);
    }
    chain.truncate(len);
    chain
}

/// How a reflection order was chosen; used to tag reports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderSpec {
    Lex,
    Rev,
    Word(Vec<usize>),
}

impl OrderSpec {
    pub fn build(&self, n: usize) -> Result<ReflectionOrder, CoxeterError> {
        match self {
            OrderSpec::Lex => ReflectionOrder::lex(n),
            OrderSpec::Rev => Ok(ReflectionOrder::lex(n)?.reverse()),
            OrderSpec::Word(word) => ReflectionOrder::from_reduced_word(n, word),
        }
    }

    /// The reduced word `1, 2 1, 3 2 1, ..., (n-1) ... 1` of the longest
    /// element. Its order differs from both lex and reverse lex for n >= 3.
    pub fn default_word(n: usize) -> Self {
        let mut word = Vec::new();
        for top in 1..n {
            word.extend((1..=top).rev());
        }
        OrderSpec::Word(word)
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Lex => write!(f, "lex"),
            OrderSpec::Rev => write!(f, "rev"),
            OrderSpec::Word(word) => {
                let parts: Vec<String> = word.iter().map(|s| s.to_string()).collect();
                write!(f, "word:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for OrderSpec {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "lex" => Ok(OrderSpec::Lex),
            "rev" => Ok(OrderSpec::Rev),
            other => {
                let csv = other
                    .strip_prefix("word:")
                    .ok_or_else(|| CoxeterError::InvalidReflection(other.to_string()))?;
                let word = csv
                    .split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| CoxeterError::InvalidReflection(other.to_string()))?;
                Ok(OrderSpec::Word(word))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Reflection {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Permutation::identity(4).unwrap();
        assert_eq!(id.compose(&p("2134")).unwrap(), p("2134"));
        assert_eq!(p("2134").compose(&p("2134")).unwrap(), id);
        let t13 = r("(13)").to_permutation(4).unwrap();
        assert_eq!(p("2134").compose(&t13).unwrap(), p("3124"));
        assert_eq!(p("2134").mul_reflection(r("(13)")), p("3124"));
    }

    #[test]
    fn compose_rank_mismatch() {
        assert_eq!(
            p("21").compose(&p("213")),
            Err(CoxeterError::RankMismatch { left: 2, right: 3 })
        );
        assert!(p("21").bruhat_leq(&p("213")).is_err());
    }

    #[test]
    fn length_examples() {
        assert_eq!(p("1234").length(), 0);
        assert_eq!(p("4321").length(), 6);
        assert_eq!(p("2134").length(), 1);
    }

    #[test]
    fn bruhat_examples() {
        assert!(p("2134").bruhat_leq(&p("2134")).unwrap());
        assert!(p("2134").bruhat_leq(&p("4321")).unwrap());
        assert!(!p("4321").bruhat_leq(&p("2134")).unwrap());
        // 2143 and 3412 have lengths 2 and 4; 2143 < 3412 through 2413 or 3142.
        assert!(p("2143").bruhat_leq(&p("3412")).unwrap());
        assert!(!p("3412").bruhat_leq(&p("2143")).unwrap());
        assert!(!p("1342").bruhat_leq(&p("4123")).unwrap());
    }

    #[test]
    fn edge_examples() {
        assert_eq!(p("2134").edge_to(&p("2143")), Some(r("(34)")));
        assert_eq!(p("2134").edge_to(&p("1234")), None);
        assert_eq!(p("2134").edge_to(&p("4321")), None);
        assert_eq!(p("2134").edge_to(&p("2134")), None);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("2,1,3,4"), p("2134"));
        assert_eq!(p("2134").to_string(), "2134");
        assert!("2234".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("21x".parse::<Permutation>().is_err());
        assert_eq!(r("(1 3)"), r("(13)"));
        assert_eq!(r("3,1"), Reflection::new(1, 3).unwrap());
        assert_eq!(r("(13)").to_string(), "(1 3)");
        assert!("(11)".parse::<Reflection>().is_err());
        assert!("(1 2 3)".parse::<Reflection>().is_err());
    }

    #[test]
    fn reflections_listing() {
        assert_eq!(all_reflections(2), vec![r("(12)")]);
        assert_eq!(all_reflections(4).len(), 6);
        assert_eq!(all_reflections(5).len(), 10);
        assert!(all_reflections(1).is_empty());
    }

    #[test]
    fn lex_order() {
        let o = ReflectionOrder::lex(4).unwrap();
        let expected: Vec<Reflection> = ["(12)", "(13)", "(14)", "(23)", "(24)", "(34)"]
            .iter()
            .map(|s| r(s))
            .collect();
        assert_eq!(o.sequence(), expected.as_slice());
        assert_eq!(o.rank_of(r("(34)")), 6);
        assert_eq!(o.rank_of(r("(12)")), 1);
        assert_eq!(o.at(4), Some(r("(23)")));
        assert_eq!(o.at(0), None);
        assert!(o.is_valid());
        let o3 = ReflectionOrder::lex(3).unwrap();
        assert_eq!(o3.sequence(), &[r("(12)"), r("(13)"), r("(23)")]);
    }

    #[test]
    fn reduced_word_orders() {
        assert_eq!(
            ReflectionOrder::from_reduced_word(2, &[1]).unwrap().sequence(),
            &[r("(12)")]
        );
        assert_eq!(
            ReflectionOrder::from_reduced_word(3, &[1, 2, 1]).unwrap().sequence(),
            &[r("(12)"), r("(13)"), r("(23)")]
        );
        assert_eq!(
            ReflectionOrder::from_reduced_word(3, &[2, 1, 2]).unwrap().sequence(),
            &[r("(23)"), r("(13)"), r("(12)")]
        );
        assert!(matches!(
            ReflectionOrder::from_reduced_word(3, &[1, 1, 2]),
            Err(CoxeterError::NotLongestWord { .. })
        ));
        assert!(matches!(
            ReflectionOrder::from_reduced_word(3, &[1, 2]),
            Err(CoxeterError::NotLongestWord { .. })
        ));
        assert!(matches!(
            ReflectionOrder::from_reduced_word(3, &[1, 3, 1]),
            Err(CoxeterError::BadGenerator { .. })
        ));
    }

    #[test]
    fn default_word_differs_from_lex_and_rev() {
        for n in 4..=6 {
            let word = OrderSpec::default_word(n).build(n).unwrap();
            let lex = ReflectionOrder::lex(n).unwrap();
            assert!(word.is_valid());
            assert_ne!(word, lex);
            assert_ne!(word, lex.reverse());
        }
    }

    #[test]
    fn reversal() {
        let o = ReflectionOrder::lex(4).unwrap();
        assert_eq!(o.reverse().reverse(), o);
        assert_eq!(o.reverse().first(), Some(r("(34)")));
        assert!(o.reverse().is_valid());
    }

    #[test]
    fn swapped_lex_order_is_rejected() {
        let mut seq = all_reflections(4);
        seq.swap(1, 2);
        let o = ReflectionOrder::from_sequence(4, seq.clone()).unwrap();
        let violation = o.validate().unwrap_err();
        let mut members = violation.restricted.clone();
        members.sort();
        assert_eq!(members, vec![r("(13)"), r("(14)"), r("(34)")]);
        assert!(matches!(
            ReflectionOrder::new(4, seq),
            Err(CoxeterError::DihedralViolation(_))
        ));
    }

    #[test]
    fn incomplete_sequences_are_rejected() {
        let mut seq = all_reflections(4);
        seq.pop();
        assert!(ReflectionOrder::from_sequence(4, seq.clone()).is_err());
        seq.push(r("(12)"));
        assert!(ReflectionOrder::from_sequence(4, seq).is_err());
    }

    #[test]
    fn order_spec_round_trip() {
        for text in ["lex", "rev", "word:1,2,1"] {
            let spec: OrderSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("bogus".parse::<OrderSpec>().is_err());
        assert_eq!(OrderSpec::default_word(4).to_string(), "word:1,2,1,3,2,1");
    }

    #[test]
    fn all_permutations() {
        let s4 = Permutation::all(4).unwrap();
        assert_eq!(s4.len(), 24);
        assert_eq!(s4[0], Permutation::identity(4).unwrap());
        assert_eq!(*s4.last().unwrap(), Permutation::longest(4).unwrap());
        assert!(s4.windows(2).all(|w| w[0] < w[1]));
    }
}
