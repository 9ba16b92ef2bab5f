//! Exact Pauli-string algebra with phase tracking.
//!
//! Sums of Pauli strings are kept as coefficient maps keyed by the letter
//! sequence, so multiplication, commutators, and Frobenius norms are exact up
//! to f64 arithmetic on the coefficients. Different Pauli strings are
//! orthonormal under the normalized Frobenius inner product, which makes the
//! norm of a sum the 2-norm of its coefficient vector.

mod bottleneck;

pub use bottleneck::{
    base_case_bound, nested_commutator, sample_bottleneck_hamiltonian,
    sample_bottleneck_hamiltonian_with_mode, CoefficientMode, Operand,
};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::tol;

/// Single-qubit Pauli letter. The ordering `I < X < Y < Z` fixes the
/// lexicographic term order used by the text serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    /// The three non-identity letters.
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Single-qubit product `self · other` as `(k, letter)` with phase `i^k`.
    pub fn multiply(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, b) => (0, b),
            (a, I) => (0, a),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli letter '{other}'"))),
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let c = Complex64::new;
        let rows = match self {
            Pauli::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            Pauli::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Pauli::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            Pauli::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        };
        ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()])
    }
}

/// A Pauli string with one of the four phases `{+1, +i, -1, -i}`, stored as
/// the exponent `k` in `i^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase_exponent: u8,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self {
            letters,
            phase_exponent: 0,
        }
    }

    pub fn with_phase(letters: Vec<Pauli>, phase_exponent: u8) -> Self {
        Self {
            letters,
            phase_exponent: phase_exponent % 4,
        }
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn phase(&self) -> Complex64 {
        match self.phase_exponent {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Sitewise product with accumulated phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                context: "pauli string multiply",
                expected: self.n(),
                actual: other.n(),
            });
        }
        let mut exponent = self.phase_exponent + other.phase_exponent;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, letter) = a.multiply(b);
                exponent += k;
                letter
            })
            .collect();
        Ok(PauliString::with_phase(letters, exponent))
    }

    /// True when the two strings commute; they anticommute otherwise.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    /// Dense matrix, qubit 0 as the leftmost (most significant) factor.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(1);
        for letter in &self.letters {
            m = m.kron(&letter.matrix());
        }
        m.scale(self.phase())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = match self.phase_exponent {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{phase}")?;
        for letter in &self.letters {
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

/// Complex-weighted sum of Pauli strings on `n` qubits.
///
/// Zero coefficients are pruned below [`tol::COEFFICIENT_PRUNE`], so exact
/// integer-phase cancellations collapse to the empty sum. The sum is
/// Hermitian iff every coefficient is real.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<Vec<Pauli>, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Pauli], Complex64)> + '_ {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, letters: &[Pauli]) -> Complex64 {
        self.terms
            .get(letters)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Accumulates `coefficient` onto the term `letters`, pruning near-zero
    /// results.
    pub fn add_term(&mut self, letters: Vec<Pauli>, coefficient: Complex64) {
        use std::collections::btree_map::Entry;
        assert_eq!(letters.len(), self.n, "term length must match qubit count");
        match self.terms.entry(letters) {
            Entry::Occupied(mut occupied) => {
                *occupied.get_mut() += coefficient;
                if occupied.get().norm() < tol::COEFFICIENT_PRUNE {
                    occupied.remove();
                }
            }
            Entry::Vacant(vacant) => {
                if coefficient.norm() >= tol::COEFFICIENT_PRUNE {
                    vacant.insert(coefficient);
                }
            }
        }
    }

    /// Convenience: a single term with the given letters placed at `sites`
    /// (identity elsewhere).
    pub fn term_at(n: usize, sites: &[(usize, Pauli)], coefficient: f64) -> Self {
        let mut letters = vec![Pauli::I; n];
        for &(site, letter) in sites {
            letters[site] = letter;
        }
        let mut sum = Self::zero(n);
        sum.add_term(letters, Complex64::new(coefficient, 0.0));
        sum
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "pauli sum add")?;
        let mut out = self.clone();
        for (letters, coeff) in other.terms() {
            out.add_term(letters.to_vec(), coeff);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (letters, coeff) in self.terms() {
            out.add_term(letters.to_vec(), coeff * factor);
        }
        out
    }

    /// Exact product, expanding term by term with phase tracking.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "pauli sum multiply")?;
        let mut out = Self::zero(self.n);
        for (la, ca) in self.terms() {
            let sa = PauliString::new(la.to_vec());
            for (lb, cb) in other.terms() {
                let sb = PauliString::new(lb.to_vec());
                let product = sa.multiply(&sb)?;
                out.add_term(product.letters().to_vec(), ca * cb * product.phase());
            }
        }
        Ok(out)
    }

    /// Exact commutator `[self, other]`.
    ///
    /// Pauli strings either commute or anticommute, so each term pair
    /// contributes either nothing or twice its product; cancellations are
    /// exact rather than left to floating-point subtraction.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "pauli sum commutator")?;
        let mut out = Self::zero(self.n);
        for (la, ca) in self.terms() {
            let sa = PauliString::new(la.to_vec());
            for (lb, cb) in other.terms() {
                let sb = PauliString::new(lb.to_vec());
                if sa.commutes_with(&sb) {
                    continue;
                }
                let product = sa.multiply(&sb)?;
                out.add_term(
                    product.letters().to_vec(),
                    ca * cb * product.phase() * 2.0,
                );
            }
        }
        Ok(out)
    }

    /// Normalized Frobenius norm: exactly `sqrt(Σ |coefficient|²)` by
    /// orthonormality of distinct Pauli strings.
    pub fn frobenius_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Upper bound on the spectral norm: the coefficient 1-norm.
    pub fn coefficient_norm_bound(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// True when all coefficients are real (within the pruning tolerance).
    pub fn is_hermitian(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.im.abs() < tol::COEFFICIENT_PRUNE)
    }

    /// Dense `2^n × 2^n` matrix, qubit 0 as the leftmost factor.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (letters, coeff) in self.terms() {
            let term = PauliString::new(letters.to_vec()).to_matrix().scale(coeff);
            out = out.add(&term);
        }
        out
    }

    /// Text serialization: one `<coeff> <letters>` line per term in stable
    /// lexicographic letter order, e.g. `0.5 XIZ`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (letters, coeff) in self.terms() {
            let value = if coeff.im.abs() < tol::COEFFICIENT_PRUNE {
                format!("{}", coeff.re)
            } else {
                format!("{}{:+}i", coeff.re, coeff.im)
            };
            out.push_str(&value);
            out.push(' ');
            for letter in letters {
                out.push(letter.as_char());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut sum = Self::zero(n);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (value, letters_text) = line
                .trim()
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("expected '<coeff> <letters>': {line}")))?;
            let coeff = parse_coefficient(value)?;
            let letters: Vec<Pauli> = letters_text
                .trim()
                .chars()
                .map(Pauli::from_char)
                .collect::<Result<_>>()?;
            if letters.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "pauli sum parse",
                    expected: n,
                    actual: letters.len(),
                });
            }
            sum.add_term(letters, coeff);
        }
        Ok(sum)
    }

    fn check_size(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }
}

fn parse_coefficient(text: &str) -> Result<Complex64> {
    if let Some(rest) = text.strip_suffix('i') {
        // Split "a+bi" / "a-bi" at the sign of the imaginary part.
        let split = rest[1..]
            .rfind(['+', '-'])
            .map(|p| p + 1)
            .ok_or_else(|| Error::Parse(format!("bad complex coefficient '{text}'")))?;
        let re: f64 = rest[..split]
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient '{text}'")))?;
        let im: f64 = rest[split..]
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient '{text}'")))?;
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = text
            .parse()
            .map_err(|_| Error::Parse(format!("bad coefficient '{text}'")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{schatten_norm, SchattenNorm};
    use crate::rng::substream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiply_x_y_gives_i_z() {
        let x = PauliString::new(vec![Pauli::X]);
        let y = PauliString::new(vec![Pauli::Y]);
        let product = x.multiply(&y).unwrap();
        assert_eq!(product.letters(), &[Pauli::Z]);
        assert_eq!(product.phase(), c(0.0, 1.0));
    }

    #[test]
    fn multiply_z_z_gives_identity() {
        let z = PauliString::new(vec![Pauli::Z]);
        let product = z.multiply(&z).unwrap();
        assert_eq!(product.letters(), &[Pauli::I]);
        assert_eq!(product.phase(), c(1.0, 0.0));
    }

    #[test]
    fn multiply_two_qubit_matches_dense() {
        let a = PauliString::new(vec![Pauli::X, Pauli::Z]);
        let b = PauliString::new(vec![Pauli::Y, Pauli::Z]);
        let product = a.multiply(&b).unwrap();
        assert_eq!(product.letters(), &[Pauli::Z, Pauli::I]);
        assert_eq!(product.phase(), c(0.0, 1.0));
        let dense = a.to_matrix().matmul(&b.to_matrix());
        assert!(dense.sub(&product.to_matrix()).max_abs_entry() < 1e-15);
    }

    #[test]
    fn commutator_of_equal_strings_vanishes() {
        let x = PauliSum::term_at(1, &[(0, Pauli::X)], 1.0);
        assert!(x.commutator(&x).unwrap().is_zero());
    }

    #[test]
    fn commutator_x_z() {
        let x = PauliSum::term_at(1, &[(0, Pauli::X)], 1.0);
        let z = PauliSum::term_at(1, &[(0, Pauli::Z)], 1.0);
        let comm = x.commutator(&z).unwrap();
        assert_eq!(comm.term_count(), 1);
        assert_eq!(comm.coefficient(&[Pauli::Y]), c(0.0, -2.0));
    }

    #[test]
    fn commutator_matches_dense_oracle() {
        // [X⊗I + I⊗X, Z⊗Z] = -2i (Y⊗Z + Z⊗Y).
        let a = PauliSum::term_at(2, &[(0, Pauli::X)], 1.0)
            .add(&PauliSum::term_at(2, &[(1, Pauli::X)], 1.0))
            .unwrap();
        let b = PauliSum::term_at(2, &[(0, Pauli::Z), (1, Pauli::Z)], 1.0);
        let comm = a.commutator(&b).unwrap();
        assert_eq!(comm.coefficient(&[Pauli::Y, Pauli::Z]), c(0.0, -2.0));
        assert_eq!(comm.coefficient(&[Pauli::Z, Pauli::Y]), c(0.0, -2.0));
        assert_eq!(comm.term_count(), 2);

        let dense_a = a.to_matrix();
        let dense_b = b.to_matrix();
        let dense_comm = dense_a.matmul(&dense_b).sub(&dense_b.matmul(&dense_a));
        assert!(dense_comm.sub(&comm.to_matrix()).max_abs_entry() < 1e-14);
    }

    #[test]
    fn commutator_antisymmetry() {
        for trial in 0..32u64 {
            let mut rng = substream(99, "antisym", trial);
            let mut a = PauliSum::zero(3);
            let mut b = PauliSum::zero(3);
            for _ in 0..6 {
                let letters_a: Vec<Pauli> =
                    (0..3).map(|_| Pauli::ALL[rng.gen_range(0..4)]).collect();
                let letters_b: Vec<Pauli> =
                    (0..3).map(|_| Pauli::ALL[rng.gen_range(0..4)]).collect();
                a.add_term(letters_a, c(rng.gen_range(-1.0..1.0), 0.0));
                b.add_term(letters_b, c(rng.gen_range(-1.0..1.0), 0.0));
            }
            let ab = a.commutator(&b).unwrap();
            let ba = b.commutator(&a).unwrap();
            let sum = ab.add(&ba).unwrap();
            assert!(sum.is_zero(), "trial {trial}: [a,b] + [b,a] = {sum:?}");
        }
    }

    #[test]
    fn frobenius_norm_of_single_string_is_one() {
        let s = PauliSum::term_at(3, &[(1, Pauli::Y)], 1.0);
        assert!((s.frobenius_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_norm_orthogonality() {
        let s = PauliSum::term_at(1, &[(0, Pauli::X)], 3.0)
            .add(&PauliSum::term_at(1, &[(0, Pauli::Z)], 4.0))
            .unwrap();
        assert!((s.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_norm_matches_dense_oracle() {
        let mut rng = substream(7, "frob", 0);
        let mut sum = PauliSum::zero(6);
        for _ in 0..20 {
            let letters: Vec<Pauli> = (0..6).map(|_| Pauli::ALL[rng.gen_range(0..4)]).collect();
            sum.add_term(letters, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let dense = sum.to_matrix();
        let oracle = schatten_norm(&dense, SchattenNorm::NormalizedFrobenius);
        assert!((sum.frobenius_norm() - oracle).abs() < 1e-10);
    }

    #[test]
    fn pruning_collapses_cancellations() {
        let mut sum = PauliSum::zero(2);
        sum.add_term(vec![Pauli::X, Pauli::I], c(0.5, 0.0));
        sum.add_term(vec![Pauli::X, Pauli::I], c(-0.5, 0.0));
        assert!(sum.is_zero());
    }

    #[test]
    fn serialization_roundtrip_and_ordering() {
        let mut sum = PauliSum::zero(3);
        sum.add_term(vec![Pauli::X, Pauli::I, Pauli::Z], c(0.5, 0.0));
        sum.add_term(vec![Pauli::I, Pauli::Y, Pauli::I], c(-0.25, 0.125));
        let text = sum.serialize();
        // Lexicographic order puts IYI before XIZ.
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].ends_with("IYI"));
        assert!(lines[1].ends_with("XIZ"));
        let parsed = PauliSum::parse(&text, 3).unwrap();
        assert_eq!(parsed, sum);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = PauliSum::term_at(2, &[(0, Pauli::X)], 1.0);
        let b = PauliSum::term_at(3, &[(0, Pauli::X)], 1.0);
        assert!(a.commutator(&b).is_err());
        let sa = PauliString::new(vec![Pauli::X]);
        let sb = PauliString::new(vec![Pauli::X, Pauli::I]);
        assert!(sa.multiply(&sb).is_err());
    }
}
