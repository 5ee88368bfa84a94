//! Integer polynomials in the noncommuting variables `A, D` and `c, d`.
//!
//! `c` and `d` embed into `Z<A,D>` through `c = A + D` and `d = AD + DA`,
//! graded so that `A`, `D`, `c` have degree 1 and `d` degree 2. Converting
//! back is an exact linear solve over the cd-monomial basis of each degree;
//! the square subsystem on the words `M(A, DA)` is unimodular, so it is
//! inverted once per degree over the integers and cached.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degree {degree} part is not in the subring generated by c = A+D, d = AD+DA")]
    NotInSubring { degree: usize },
    #[error("degree {degree} polynomial has no expansion f_n + f_(n-1) D + ... + f_0 D^n")]
    NotExpressible { degree: usize },
    #[error("degree {degree} polynomial is not of the form f + A g with f, g in Z<c,d>")]
    NotDecomposable { degree: usize },
    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: usize },
    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
    #[error("cannot parse monomial {0:?}")]
    Parse(String),
}

/// Words are stored most-significant-bit first so that comparing the bit
/// patterns of equal-length words is lexicographic comparison.
const MAX_WORD: usize = 64;

fn letter_bit(k: usize) -> u64 {
    1u64 << (MAX_WORD - 1 - k)
}

pub trait Monomial: Copy + Ord + Hash + fmt::Display + FromStr<Err = PolyError> {
    fn one() -> Self;
    fn degree(&self) -> usize;
    fn concat(&self, other: &Self) -> Self;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdLetter {
    A,
    D,
}

impl AdLetter {
    pub fn flipped(self) -> Self {
        match self {
            AdLetter::A => AdLetter::D,
            AdLetter::D => AdLetter::A,
        }
    }
}

impl fmt::Display for AdLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdLetter::A => "A",
            AdLetter::D => "D",
        })
    }
}

/// A word in `A, D`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdMonomial {
    len: u8,
    bits: u64,
}

impl AdMonomial {
    pub fn empty() -> Self {
        Self { len: 0, bits: 0 }
    }

    pub fn from_letters(letters: &[AdLetter]) -> Self {
        let mut m = Self::empty();
        for &l in letters {
            m.push(l);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> AdLetter {
        assert!(k < self.len());
        if self.bits & letter_bit(k) != 0 {
            AdLetter::D
        } else {
            AdLetter::A
        }
    }

    pub fn push(&mut self, letter: AdLetter) {
        assert!(self.len() < MAX_WORD, "word too long");
        if letter == AdLetter::D {
            self.bits |= letter_bit(self.len());
        }
        self.len += 1;
    }

    pub fn letters(&self) -> impl Iterator<Item = AdLetter> + '_ {
        (0..self.len()).map(|k| self.get(k))
    }

    pub fn first(&self) -> Option<AdLetter> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn last(&self) -> Option<AdLetter> {
        (!self.is_empty()).then(|| self.get(self.len() - 1))
    }

    /// Letters `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len());
        let mut m = Self::empty();
        for k in start..end {
            m.push(self.get(k));
        }
        m
    }

    /// The word with the first letter removed.
    pub fn tail(&self) -> Self {
        self.slice(1.min(self.len()), self.len())
    }

    /// Swap `A` and `D`.
    pub fn bar(&self) -> Self {
        let mask = if self.len == 0 {
            0
        } else {
            !0u64 << (MAX_WORD - self.len())
        };
        Self {
            len: self.len,
            bits: self.bits ^ mask,
        }
    }

    /// Words in which every `D` is followed by an `A` are exactly the images
    /// `M(A, DA)` of cd-monomials.
    pub fn to_cd(&self) -> Option<CdMonomial> {
        let mut m = CdMonomial::one();
        let mut k = 0;
        while k < self.len() {
            match self.get(k) {
                AdLetter::A => {
                    m.push(CdLetter::C);
                    k += 1;
                }
                AdLetter::D => {
                    if k + 1 < self.len() && self.get(k + 1) == AdLetter::A {
                        m.push(CdLetter::D);
                        k += 2;
                    } else {
                        return None;
                    }
                }
            }
        }
        Some(m)
    }
}

impl Monomial for AdMonomial {
    fn one() -> Self {
        Self::empty()
    }

    fn degree(&self) -> usize {
        self.len()
    }

    fn concat(&self, other: &Self) -> Self {
        assert!(self.len() + other.len() <= MAX_WORD, "word too long");
        Self {
            len: self.len + other.len,
            bits: self.bits | other.bits.checked_shr(self.len as u32).unwrap_or(0),
        }
    }
}

impl PartialOrd for AdMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorter words first, then lexicographic with `A < D`.
impl Ord for AdMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for AdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts words over `{A, D}`; `""` and `"1"` denote the empty word.
impl FromStr for AdMonomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Self::empty());
        }
        if s.len() > MAX_WORD {
            return Err(PolyError::Parse(s.to_string()));
        }
        let mut m = Self::empty();
        for ch in s.chars() {
            m.push(match ch {
                'A' => AdLetter::A,
                'D' => AdLetter::D,
                _ => return Err(PolyError::Parse(s.to_string())),
            });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CdLetter {
    C,
    D,
}

/// A word in `c, d`. Its degree counts `d` twice.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CdMonomial {
    len: u8,
    bits: u64,
}

impl CdMonomial {
    pub fn from_letters(letters: &[CdLetter]) -> Self {
        let mut m = Self::one();
        for &l in letters {
            m.push(l);
        }
        m
    }

    /// `c^k`.
    pub fn c_power(k: usize) -> Self {
        Self::from_letters(&vec![CdLetter::C; k])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> CdLetter {
        assert!(k < self.len());
        if self.bits & letter_bit(k) != 0 {
            CdLetter::D
        } else {
            CdLetter::C
        }
    }

    pub fn push(&mut self, letter: CdLetter) {
        assert!(self.len() < MAX_WORD, "word too long");
        if letter == CdLetter::D {
            self.bits |= letter_bit(self.len());
        }
        self.len += 1;
    }

    pub fn letters(&self) -> impl Iterator<Item = CdLetter> + '_ {
        (0..self.len()).map(|k| self.get(k))
    }

    pub fn d_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn first(&self) -> Option<CdLetter> {
        (!self.is_empty()).then(|| self.get(0))
    }

    /// The word with the first letter removed.
    pub fn tail(&self) -> Self {
        let mut m = Self::one();
        for k in 1..self.len() {
            m.push(self.get(k));
        }
        m
    }

    /// `M(A, DA)`: substitute `c -> A`, `d -> DA`.
    pub fn to_ad(&self) -> AdMonomial {
        let mut w = AdMonomial::empty();
        for l in self.letters() {
            match l {
                CdLetter::C => w.push(AdLetter::A),
                CdLetter::D => {
                    w.push(AdLetter::D);
                    w.push(AdLetter::A);
                }
            }
        }
        w
    }
}

impl Monomial for CdMonomial {
    fn one() -> Self {
        Self { len: 0, bits: 0 }
    }

    fn degree(&self) -> usize {
        self.len() + self.d_count()
    }

    fn concat(&self, other: &Self) -> Self {
        assert!(self.len() + other.len() <= MAX_WORD, "word too long");
        Self {
            len: self.len + other.len,
            bits: self.bits | other.bits.checked_shr(self.len as u32).unwrap_or(0),
        }
    }
}

impl PartialOrd for CdMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// By degree, then lexicographic with `c < d`.
impl Ord for CdMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.bits.cmp(&other.bits))
            .then(self.len.cmp(&other.len))
    }
}

impl fmt::Display for CdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            f.write_str(match l {
                CdLetter::C => "c",
                CdLetter::D => "d",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CdMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts words over `{c, d}`; `""` and `"1"` denote the empty word.
impl FromStr for CdMonomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Self::one());
        }
        if s.len() > MAX_WORD {
            return Err(PolyError::Parse(s.to_string()));
        }
        let mut m = Self::one();
        for ch in s.chars() {
            m.push(match ch {
                'c' => CdLetter::C,
                'd' => CdLetter::D,
                _ => return Err(PolyError::Parse(s.to_string())),
            });
        }
        Ok(m)
    }
}

/// All cd-monomials of degree `n`, sorted. There are Fibonacci(n+1) of them.
pub fn cd_monomials(n: usize) -> Vec<CdMonomial> {
    let mut by_degree: Vec<Vec<CdMonomial>> = vec![vec![CdMonomial::one()]];
    for k in 1..=n {
        let mut level: Vec<CdMonomial> = by_degree[k - 1]
            .iter()
            .map(|m| {
                let mut m = *m;
                m.push(CdLetter::C);
                m
            })
            .collect();
        if k >= 2 {
            level.extend(by_degree[k - 2].iter().map(|m| {
                let mut m = *m;
                m.push(CdLetter::D);
                m
            }));
        }
        by_degree.push(level);
    }
    let mut out = by_degree.swap_remove(n);
    out.sort();
    out
}

/// A polynomial with `i64` coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<M: Monomial> {
    terms: BTreeMap<M, i64>,
}

pub type AdPolynomial = Polynomial<AdMonomial>;
pub type CdPolynomial = Polynomial<CdMonomial>;

impl<M: Monomial> Default for Polynomial<M> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<M: Monomial> Polynomial<M> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::term(M::one(), c)
    }

    pub fn term(m: M, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (M, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &M) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&M, &i64)> {
        self.terms.iter()
    }

    /// Adds `c * m`. Panics on `i64` overflow.
    pub fn add_term(&mut self, m: M, c: i64) {
        self.try_add_term(m, c).expect("coefficient overflow");
    }

    pub fn try_add_term(&mut self, m: M, c: i64) -> Result<(), PolyError> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry = entry.checked_add(c).ok_or(PolyError::Overflow)?;
        if *entry == 0 {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: i64) -> Result<(), PolyError> {
        for (m, c) in &other.terms {
            self.try_add_term(*m, c.checked_mul(scale).ok_or(PolyError::Overflow)?)?;
        }
        Ok(())
    }

    pub fn scaled(&self, scale: i64) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, scale).expect("coefficient overflow");
        out
    }

    /// Noncommutative product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x.checked_mul(*y).expect("coefficient overflow"));
            }
        }
        out
    }

    /// Left multiplication by a monomial.
    pub fn left_mul(&self, m: &M) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (m.concat(w), *c)))
    }

    /// Right multiplication by a monomial.
    pub fn right_mul(&self, m: &M) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.concat(m), *c)))
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Degrees with at least one nonzero term, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    /// `{"monomial": coefficient}` with monomials in their text form.
    pub fn to_string_map(&self) -> BTreeMap<String, i64> {
        self.terms.iter().map(|(m, c)| (m.to_string(), *c)).collect()
    }

    pub fn from_string_map(map: &BTreeMap<String, i64>) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for (k, c) in map {
            p.try_add_term(k.parse()?, *c)?;
        }
        Ok(p)
    }
}

impl<M: Monomial> std::ops::Add for &Polynomial<M> {
    type Output = Polynomial<M>;

    fn add(self, rhs: Self) -> Polynomial<M> {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, 1).expect("coefficient overflow");
        out
    }
}

impl<M: Monomial> std::ops::Sub for &Polynomial<M> {
    type Output = Polynomial<M>;

    fn sub(self, rhs: Self) -> Polynomial<M> {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, -1).expect("coefficient overflow");
        out
    }
}

impl<M: Monomial> std::ops::Neg for &Polynomial<M> {
    type Output = Polynomial<M>;

    fn neg(self) -> Polynomial<M> {
        self.scaled(-1)
    }
}

/// Terms in monomial order, with runs written as powers: `2c^2+d`.
impl<M: Monomial> fmt::Display for Polynomial<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let word = compress_runs(&m.to_string());
            let is_one = word == "1";
            if c < 0 {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let abs = c.unsigned_abs();
            if is_one {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                f.write_str(&word)?;
            } else {
                write!(f, "{abs}{word}")?;
            }
        }
        Ok(())
    }
}

impl<M: Monomial> fmt::Debug for Polynomial<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn compress_runs(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::new();
    let mut k = 0;
    while k < chars.len() {
        let mut run = 1;
        while k + run < chars.len() && chars[k + run] == chars[k] {
            run += 1;
        }
        out.push(chars[k]);
        if run > 1 {
            out.push_str(&format!("^{run}"));
        }
        k += run;
    }
    out
}

fn expand_runs(word: &str) -> Result<String, PolyError> {
    let bad = || PolyError::Parse(word.to_string());
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        k += 1;
        if chars.get(k) == Some(&'^') {
            let start = k + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let run: usize = chars[start..end]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| bad())?;
            if run > MAX_WORD {
                return Err(bad());
            }
            out.extend(std::iter::repeat_n(ch, run));
            k = end;
        } else {
            out.push(ch);
        }
    }
    Ok(out)
}

/// Inverse of `Display`: `2c^2+d`, `3-cd`, `0`. Whitespace is ignored.
impl<M: Monomial> FromStr for Polynomial<M> {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(PolyError::Parse(s.to_string()));
        }
        let mut out = Self::zero();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let (coeff, word) = term.split_at(digits);
            if coeff.is_empty() && word.is_empty() {
                return Err(PolyError::Parse(s.to_string()));
            }
            let c: i64 = if coeff.is_empty() {
                1
            } else {
                coeff.parse().map_err(|_| PolyError::Parse(s.to_string()))?
            };
            let m: M = if word.is_empty() {
                M::one()
            } else {
                expand_runs(word)?.parse()?
            };
            out.try_add_term(m, sign * c)?;
        }
        Ok(out)
    }
}

impl<M: Monomial> Serialize for Polynomial<M> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_string_map().serialize(serializer)
    }
}

impl<'de, M: Monomial> Deserialize<'de> for Polynomial<M> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, i64>::deserialize(deserializer)?;
        Self::from_string_map(&map).map_err(serde::de::Error::custom)
    }
}

/// `A + D`.
pub fn c_ad() -> AdPolynomial {
    AdPolynomial::from_terms([("A", 1), ("D", 1)].map(|(w, c)| (w.parse().unwrap(), c)))
}

/// `AD + DA`.
pub fn d_ad() -> AdPolynomial {
    AdPolynomial::from_terms([("AD", 1), ("DA", 1)].map(|(w, c)| (w.parse().unwrap(), c)))
}

fn single(letter: AdLetter) -> AdMonomial {
    AdMonomial::from_letters(&[letter])
}

/// Image of a single cd-monomial under `c -> A+D`, `d -> AD+DA`.
pub fn expand_cd_monomial(m: &CdMonomial) -> AdPolynomial {
    let c = c_ad();
    let d = d_ad();
    let mut out = AdPolynomial::constant(1);
    for l in m.letters() {
        out = out.mul(match l {
            CdLetter::C => &c,
            CdLetter::D => &d,
        });
    }
    out
}

pub fn expand_cd(p: &CdPolynomial) -> AdPolynomial {
    let mut out = AdPolynomial::zero();
    for (m, c) in p.terms() {
        out.add_assign_scaled(&expand_cd_monomial(m), *c)
            .expect("coefficient overflow");
    }
    out
}

/// The involution `f(A, D) -> f(D, A)`.
pub fn bar(p: &AdPolynomial) -> AdPolynomial {
    AdPolynomial::from_terms(p.terms().map(|(m, c)| (m.bar(), *c)))
}

/// `M(A, DA)`.
pub fn cd_monomial_to_ad(m: &CdMonomial) -> AdMonomial {
    m.to_ad()
}

pub fn coefficient(p: &CdPolynomial, m: &CdMonomial) -> i64 {
    p.coefficient(m)
}

/// The cd-basis system of one degree, with its integer inverse.
struct BasisSystem {
    monomials: Vec<CdMonomial>,
    rows: Vec<AdMonomial>,
    inverse: Vec<Vec<i64>>,
}

impl BasisSystem {
    fn build(degree: usize) -> Result<Self, PolyError> {
        let monomials = cd_monomials(degree);
        let rows: Vec<AdMonomial> = monomials.iter().map(|m| m.to_ad()).collect();
        let row_index: HashMap<AdMonomial, usize> =
            rows.iter().enumerate().map(|(k, w)| (*w, k)).collect();
        let size = monomials.len();
        let mut matrix = vec![vec![0i64; size]; size];
        for (col, m) in monomials.iter().enumerate() {
            for (w, c) in expand_cd_monomial(m).terms() {
                if let Some(&row) = row_index.get(w) {
                    matrix[row][col] = *c;
                }
            }
        }
        let inverse = unimodular_inverse(matrix)?.ok_or(PolyError::NotInSubring { degree })?;
        Ok(Self {
            monomials,
            rows,
            inverse,
        })
    }

    fn cached(degree: usize) -> Result<Arc<Self>, PolyError> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BasisSystem>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(sys) = cache.lock().expect("basis cache poisoned").get(&degree) {
            return Ok(Arc::clone(sys));
        }
        let sys = Arc::new(Self::build(degree)?);
        cache
            .lock()
            .expect("basis cache poisoned")
            .entry(degree)
            .or_insert_with(|| Arc::clone(&sys));
        Ok(sys)
    }
}

/// Gauss-Jordan elimination over the integers using only unimodular row
/// operations (Euclid-style reduction within each column).
/// Returns `None` if the matrix is not invertible over the integers.
fn unimodular_inverse(mut a: Vec<Vec<i64>>) -> Result<Option<Vec<Vec<i64>>>, PolyError> {
    let size = a.len();
    let mut inv: Vec<Vec<i64>> = (0..size)
        .map(|r| (0..size).map(|c| i64::from(r == c)).collect())
        .collect();
    let sub_row = |m: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| -> Result<(), PolyError> {
        for c in 0..size {
            let delta = m[src][c].checked_mul(q).ok_or(PolyError::Overflow)?;
            m[dst][c] = m[dst][c].checked_sub(delta).ok_or(PolyError::Overflow)?;
        }
        Ok(())
    };
    for col in 0..size {
        loop {
            let Some(pivot) = (col..size)
                .filter(|&r| a[r][col] != 0)
                .min_by_key(|&r| a[r][col].unsigned_abs())
            else {
                return Ok(None);
            };
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let mut done = true;
            for r in col + 1..size {
                if a[r][col] != 0 {
                    let q = a[r][col] / a[col][col];
                    sub_row(&mut a, r, col, q)?;
                    sub_row(&mut inv, r, col, q)?;
                    done &= a[r][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if a[col][col].abs() != 1 {
            return Ok(None);
        }
        if a[col][col] == -1 {
            for c in 0..size {
                a[col][c] = -a[col][c];
                inv[col][c] = -inv[col][c];
            }
        }
    }
    for col in (0..size).rev() {
        for r in 0..col {
            let q = a[r][col];
            if q != 0 {
                sub_row(&mut a, r, col, q)?;
                sub_row(&mut inv, r, col, q)?;
            }
        }
    }
    Ok(Some(inv))
}

/// The unique cd-polynomial whose image is `p`, solved degree by degree.
/// Fails with [`PolyError::NotInSubring`] when the residual is nonzero.
pub fn ad_to_cd(p: &AdPolynomial) -> Result<CdPolynomial, PolyError> {
    let mut out = CdPolynomial::zero();
    for degree in p.degrees() {
        let part = p.homogeneous_part(degree);
        let sys = BasisSystem::cached(degree)?;
        let rhs: Vec<i64> = sys.rows.iter().map(|w| part.coefficient(w)).collect();
        let mut solved = CdPolynomial::zero();
        for (k, m) in sys.monomials.iter().enumerate() {
            let mut acc: i128 = 0;
            for (a, b) in sys.inverse[k].iter().zip(&rhs) {
                acc += i128::from(*a) * i128::from(*b);
            }
            let coeff = i64::try_from(acc).map_err(|_| PolyError::Overflow)?;
            solved.try_add_term(*m, coeff)?;
        }
        if expand_cd(&solved) != part {
            return Err(PolyError::NotInSubring { degree });
        }
        for (m, c) in solved.terms() {
            out.try_add_term(*m, *c)?;
        }
    }
    Ok(out)
}

/// Words ending in `letter`, with that last letter removed.
pub fn right_contract(p: &AdPolynomial, letter: AdLetter) -> AdPolynomial {
    AdPolynomial::from_terms(
        p.terms()
            .filter(|(m, _)| m.last() == Some(letter))
            .map(|(m, c)| (m.slice(0, m.len() - 1), *c)),
    )
}

/// Words starting with `letter`, with that first letter removed.
pub fn left_contract(p: &AdPolynomial, letter: AdLetter) -> AdPolynomial {
    AdPolynomial::from_terms(
        p.terms()
            .filter(|(m, _)| m.first() == Some(letter))
            .map(|(m, c)| (m.tail(), *c)),
    )
}

fn require_homogeneous(p: &AdPolynomial, degree: usize) -> Result<(), PolyError> {
    if p.is_homogeneous_of(degree) {
        Ok(())
    } else {
        Err(PolyError::NotHomogeneous { expected: degree })
    }
}

/// Writes `q = f + g D` with cd-polynomials `f`, `g`, recovering `g` from
/// `q - bar(q) = g (D - A)`.
fn split_f_plus_gd(q: &AdPolynomial, degree: usize) -> Option<(CdPolynomial, CdPolynomial)> {
    let diff = q - &bar(q);
    let g_ad = right_contract(&diff, AdLetter::D);
    let g = ad_to_cd(&g_ad).ok()?;
    let f = ad_to_cd(&(q - &expand_cd(&g).right_mul(&single(AdLetter::D)))).ok()?;
    let rebuilt = &expand_cd(&f) + &expand_cd(&g).right_mul(&single(AdLetter::D));
    (rebuilt == *q && f.is_homogeneous_of(degree)).then_some((f, g))
}

/// The expansion `p = f_n + f_(n-1) D + ... + f_0 D^n`, returned as
/// `[f_n, f_(n-1), ..., f_0]`.
///
/// Only words ending in `A` receive contributions from `f_n`, and among
/// those `f_n = f_c c + f_d d` contributes `f_c A + f_d DA`; so the right
/// contraction of `p` by `A` must split as `f_c + f_d D`. Subtracting `f_n`
/// leaves a multiple of `D` on the right and the procedure repeats. Such an
/// expansion does not exist for every `p` once `n >= 3` (the expansions span
/// a proper subspace), in which case [`PolyError::NotExpressible`] is
/// returned.
pub fn d_expansion(p: &AdPolynomial, degree: usize) -> Result<Vec<CdPolynomial>, PolyError> {
    require_homogeneous(p, degree)?;
    let not_expressible = PolyError::NotExpressible { degree };
    let mut parts = Vec::with_capacity(degree + 1);
    let mut current = p.clone();
    for k in (1..=degree).rev() {
        let ends_in_a = right_contract(&current, AdLetter::A);
        let (fc, fd) = split_f_plus_gd(&ends_in_a, k - 1).ok_or_else(|| not_expressible.clone())?;
        let mut top = CdPolynomial::zero();
        top.add_assign_scaled(&fc.right_mul(&"c".parse().unwrap()), 1)?;
        top.add_assign_scaled(&fd.right_mul(&"d".parse().unwrap()), 1)?;
        let rest = &current - &expand_cd(&top);
        if rest.terms().any(|(m, _)| m.last() != Some(AdLetter::D)) {
            return Err(not_expressible);
        }
        parts.push(top);
        current = right_contract(&rest, AdLetter::D);
    }
    if current.terms().any(|(m, _)| !m.is_empty()) {
        return Err(not_expressible);
    }
    parts.push(CdPolynomial::constant(current.coefficient(&AdMonomial::empty())));
    Ok(parts)
}

/// Reassembles `f_n + f_(n-1) D + ... + f_0 D^n`.
pub fn assemble_d_expansion(parts: &[CdPolynomial]) -> AdPolynomial {
    let mut out = AdPolynomial::zero();
    let mut d_power = AdMonomial::empty();
    for f in parts {
        out.add_assign_scaled(&expand_cd(f).right_mul(&d_power), 1)
            .expect("coefficient overflow");
        d_power.push(AdLetter::D);
    }
    out
}

/// Writes a homogeneous `p` as `f + A g` with cd-polynomials `f` of degree
/// `n` and `g` of degree `n - 1`. Since `bar(f + A g) = f + D g`, the
/// difference `p - bar(p)` equals `(A - D) g`.
pub fn decompose_f_plus_ag(
    p: &AdPolynomial,
    degree: usize,
) -> Result<(CdPolynomial, CdPolynomial), PolyError> {
    require_homogeneous(p, degree)?;
    let not_decomposable = || PolyError::NotDecomposable { degree };
    let diff = p - &bar(p);
    let g_ad = left_contract(&diff, AdLetter::A);
    let g = ad_to_cd(&g_ad).map_err(|_| not_decomposable())?;
    let a_g = expand_cd(&g).left_mul(&single(AdLetter::A));
    let f = ad_to_cd(&(p - &a_g)).map_err(|_| not_decomposable())?;
    if &expand_cd(&f) + &a_g != *p {
        return Err(not_decomposable());
    }
    Ok((f, g))
}
