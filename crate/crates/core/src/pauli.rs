//! Bit-packed n-qubit Pauli strings and sparse Pauli sums.
//!
//! A [`PauliString`] stores `i^phase * prod_k X_k^{x_k} Z_k^{z_k}` with qubit `k`
//! on bit `k` of both masks. Qubit 0 is the leftmost tensor factor, i.e. the most
//! significant bit of a dense basis index.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Powers of `i`.
pub fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        PauliString {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Raw constructor for `i^phase X^x Z^z`.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Self {
        assert!(n <= MAX_QUBITS);
        let mask = (1u64 << n) - 1;
        PauliString {
            n,
            x: x & mask,
            z: z & mask,
            phase: phase % 4,
        }
    }

    /// The Hermitian product of single-qubit letters (Y taken literally).
    pub fn from_letters(letters: &[Letter]) -> Self {
        let n = letters.len();
        let (mut x, mut z) = (0u64, 0u64);
        for (k, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x |= u64::from(xb) << k;
            z |= u64::from(zb) << k;
        }
        let phase = ((x & z).count_ones() % 4) as u8;
        PauliString { n, x, z, phase }
    }

    /// Parses labels such as `"XZI"` (qubit 0 first) with an optional `+`, `-`, `i`, `-i` prefix.
    pub fn from_label(label: &str) -> Result<Self> {
        let (extra, body) = if let Some(r) = label.strip_prefix("-i") {
            (2u8 + 1, r)
        } else if let Some(r) = label.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = label.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = label.strip_prefix('+') {
            (0, r)
        } else {
            (0, label)
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::InvalidArgument(format!("bad Pauli label {label}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.len() > MAX_QUBITS {
            return Err(Error::UnsupportedSize(letters.len()));
        }
        let mut p = PauliString::from_letters(&letters);
        p.phase = (p.phase + extra) % 4;
        Ok(p)
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut letters = vec![Letter::I; n];
        letters[qubit] = letter;
        PauliString::from_letters(&letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|k| self.letter(k)).collect()
    }

    /// Phase exponent the letter product would carry.
    fn letter_phase(&self) -> u8 {
        ((self.x & self.z).count_ones() % 4) as u8
    }

    /// Returns `(c, P)` with `self = c * P` and `P` the Hermitian letter product.
    pub fn hermitian_form(&self) -> (Complex64, PauliString) {
        let canonical = PauliString {
            phase: self.letter_phase(),
            ..*self
        };
        let rel = (4 + self.phase - canonical.phase) % 4;
        (i_pow(rel), canonical)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase + 4 - self.letter_phase()).is_multiple_of(2)
    }

    pub fn dagger(&self) -> Self {
        // (i^p X^x Z^z)^dag = i^-p (-1)^{|x&z|} X^x Z^z
        let flip = if (self.x & self.z).count_ones() % 2 == 1 { 2 } else { 0 };
        PauliString {
            phase: (4 - self.phase + flip) % 4,
            ..*self
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a^c} Z^{b^d}
        let sign = if (self.z & other.x).count_ones() % 2 == 1 { 2 } else { 0 };
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + sign) % 4,
        })
    }

    fn index_mask(&self, mask: u64) -> usize {
        (0..self.n)
            .filter(|k| mask >> k & 1 == 1)
            .fold(0usize, |acc, k| acc | 1 << (self.n - 1 - k))
    }

    /// `(flip, zmask)` in dense-index bit order: `X^x Z^z |i> = (-1)^{|zmask & i|} |i ^ flip>`.
    pub fn index_masks(&self) -> (usize, usize) {
        (self.index_mask(self.x), self.index_mask(self.z))
    }

    /// `Tr[self * A]` for a dense `2^n x 2^n` matrix, in O(2^n).
    pub fn trace_with(&self, a: &DMatrix<Complex64>) -> Complex64 {
        let (flip, zm) = self.index_masks();
        let mut acc = Complex64::new(0.0, 0.0);
        // self_{i, i^flip} = i^p (-1)^{|zm & (i^flip)|}
        for i in 0..a.nrows() {
            let k = i ^ flip;
            let v = a[(k, i)];
            if (zm & k).count_ones() % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        acc * i_pow(self.phase)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n;
        let (flip, zm) = self.index_masks();
        let ph = i_pow(self.phase);
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            let sign = if (zm & i).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(i ^ flip, i)] = ph * sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, p) = self.hermitian_form();
        let prefix = match (c.re.round() as i32, c.im.round() as i32) {
            (1, 0) => "",
            (-1, 0) => "-",
            (0, 1) => "i",
            _ => "-i",
        };
        let body: String = p
            .letters()
            .iter()
            .map(|l| match l {
                Letter::I => 'I',
                Letter::X => 'X',
                Letter::Y => 'Y',
                Letter::Z => 'Z',
            })
            .collect();
        write!(f, "{prefix}{body}")
    }
}

/// Majorana operator `c_mu` (1-based) under the Jordan–Wigner map on `n` qubits.
pub fn majorana(mu: usize, n: usize) -> Result<PauliString> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::UnsupportedSize(n));
    }
    if mu == 0 || mu > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "Majorana index {mu} outside 1..={}",
            2 * n
        )));
    }
    let k = (mu - 1) / 2;
    let mut letters = vec![Letter::I; n];
    for l in letters.iter_mut().take(k) {
        *l = Letter::Z;
    }
    letters[k] = if mu % 2 == 1 { Letter::X } else { Letter::Y };
    Ok(PauliString::from_letters(&letters))
}

/// Majorana content `(a, b)` of a Pauli string: bit `k` of `a` (resp. `b`) flags
/// `c_{2k+1}` (resp. `c_{2k+2}`) in the ascending monomial equal to it up to phase.
pub fn majorana_content(p: &PauliString) -> (u64, u64) {
    let (mut a, mut b) = (0u64, 0u64);
    let mut parity_after = false;
    for k in (0..p.n).rev() {
        let x = p.x >> k & 1 == 1;
        let z = p.z >> k & 1 == 1;
        let bk = z ^ parity_after;
        let ak = x ^ bk;
        a |= u64::from(ak) << k;
        b |= u64::from(bk) << k;
        parity_after ^= ak ^ bk;
    }
    (a, b)
}

/// Number of distinct Majoranas in the monomial equal to `p` up to phase.
pub fn majorana_degree(p: &PauliString) -> u32 {
    let (a, b) = majorana_content(p);
    a.count_ones() + b.count_ones()
}

fn reverse_bits(v: usize, n: usize) -> u64 {
    (0..n)
        .filter(|b| v >> b & 1 == 1)
        .fold(0u64, |acc, b| acc | 1 << (n - 1 - b))
}

/// Calls `f(x, z, Tr[P A])` for every Hermitian letter product `P` with qubit
/// masks `(x, z)`, using one Walsh–Hadamard transform per flip pattern.
pub fn pauli_transform(a: &DMatrix<Complex64>, mut f: impl FnMut(u64, u64, Complex64)) -> Result<()> {
    let d = a.nrows();
    if !d.is_power_of_two() || a.ncols() != d || d < 2 {
        return Err(Error::DimensionMismatch {
            expected: d.next_power_of_two().max(2),
            got: d,
        });
    }
    let n = d.trailing_zeros() as usize;
    let mut w = vec![Complex64::new(0.0, 0.0); d];
    for flip in 0..d {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = a[(i, i ^ flip)];
        }
        let mut h = 1;
        while h < d {
            for block in (0..d).step_by(2 * h) {
                for i in block..block + h {
                    let (u, v) = (w[i], w[i + h]);
                    w[i] = u + v;
                    w[i + h] = u - v;
                }
            }
            h *= 2;
        }
        let x = reverse_bits(flip, n);
        for (zm, &t) in w.iter().enumerate() {
            let z = reverse_bits(zm, n);
            f(x, z, t * i_pow((x & z).count_ones() as u8))
        }
    }
    Ok(())
}

/// A complex linear combination of Hermitian Pauli letter products.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut s = PauliSum::zero(n);
        s.add_term(Complex64::new(1.0, 0.0), &PauliString::identity(n));
        s
    }

    pub fn from_string(coeff: Complex64, p: &PauliString) -> Self {
        let mut s = PauliSum::zero(p.n);
        s.add_term(coeff, p);
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * p`, folding the string phase into the coefficient.
    pub fn add_term(&mut self, coeff: Complex64, p: &PauliString) {
        assert_eq!(p.n, self.n, "qubit count mismatch");
        let (c, canon) = p.hermitian_form();
        let key = (canon.x, canon.z);
        let v = *self.terms.get(&key).unwrap_or(&Complex64::new(0.0, 0.0)) + coeff * c;
        if v == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    /// Iterates `(coefficient, Hermitian letter product)`.
    pub fn terms(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        self.terms.iter().map(move |(&(x, z), &c)| {
            let phase = ((x & z).count_ones() % 4) as u8;
            (c, PauliString { n: self.n, x, z, phase })
        })
    }

    /// Coefficient on the Hermitian letter product with the given masks.
    pub fn coefficient(&self, x: u64, z: u64) -> Complex64 {
        *self.terms.get(&(x, z)).unwrap_or(&Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, k: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (c, p) in self.terms() {
            out.add_term(c * k, &p);
        }
        out
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.clone();
        for (c, p) in other.terms() {
            out.add_term(c, &p);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = PauliSum::zero(self.n);
        for (a, p) in self.terms() {
            for (b, q) in other.terms() {
                out.add_term(a * b, &p.mul(&q)?);
            }
        }
        Ok(out)
    }

    pub fn dagger(&self) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (c, p) in self.terms() {
            out.add_term(c.conj(), &p);
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// `Tr[self^dag other]` from the orthogonality `Tr[P Q] = 2^n delta_PQ`.
    pub fn trace_inner(&self, other: &PauliSum) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let dim = (self.n as f64).exp2();
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, a) in &self.terms {
            if let Some(b) = other.terms.get(key) {
                acc += a.conj() * b;
            }
        }
        Ok(acc * dim)
    }

    pub fn trace(&self) -> Complex64 {
        self.coefficient(0, 0) * (self.n as f64).exp2()
    }

    /// Conjugates by `exp(-i angle P_k / 2)` for the Pauli `P` on `axis`.
    pub fn rotate_qubit(&self, qubit: usize, axis: Axis, angle: f64) -> Result<PauliSum> {
        if qubit >= self.n {
            return Err(Error::InvalidArgument(format!("qubit {qubit} >= {}", self.n)));
        }
        let (c, s) = (angle.cos(), angle.sin());
        let mut out = PauliSum::zero(self.n);
        for (coeff, p) in self.terms() {
            let image: Vec<(Letter, f64)> = match (axis, p.letter(qubit)) {
                (_, Letter::I) => vec![(Letter::I, 1.0)],
                (Axis::Z, Letter::X) => vec![(Letter::X, c), (Letter::Y, s)],
                (Axis::Z, Letter::Y) => vec![(Letter::Y, c), (Letter::X, -s)],
                (Axis::Y, Letter::Z) => vec![(Letter::Z, c), (Letter::X, s)],
                (Axis::Y, Letter::X) => vec![(Letter::X, c), (Letter::Z, -s)],
                (Axis::X, Letter::Y) => vec![(Letter::Y, c), (Letter::Z, s)],
                (Axis::X, Letter::Z) => vec![(Letter::Z, c), (Letter::Y, -s)],
                (_, l) => vec![(l, 1.0)],
            };
            let mut letters = p.letters();
            for (l, w) in image {
                if w == 0.0 {
                    continue;
                }
                letters[qubit] = l;
                out.add_term(coeff * w, &PauliString::from_letters(&letters));
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n;
        let mut m = DMatrix::zeros(d, d);
        for (c, p) in self.terms() {
            let (flip, zm) = p.index_masks();
            let ph = i_pow(p.phase) * c;
            for i in 0..d {
                let sign = if (zm & i).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                m[(i ^ flip, i)] += ph * sign;
            }
        }
        m
    }

    /// Expands a dense matrix into Pauli coefficients (cost `4^n 2^n`).
    pub fn from_dense(a: &DMatrix<Complex64>, tol: f64) -> Result<PauliSum> {
        let d = a.nrows();
        if d != a.ncols() || !d.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: d.next_power_of_two(),
                got: a.ncols(),
            });
        }
        let n = d.trailing_zeros() as usize;
        let mut out = PauliSum::zero(n);
        for x in 0..(1u64 << n) {
            for z in 0..(1u64 << n) {
                let p = PauliString::from_masks(n, x, z, ((x & z).count_ones() % 4) as u8);
                let c = p.trace_with(a) / d as f64;
                if c.norm() > tol {
                    out.add_term(c, &p);
                }
            }
        }
        Ok(out)
    }
}
