//! Reversible quantum channels as unitary matrices on tensor-product spaces.
//!
//! Matrices are dense, row-major in big-endian joint indices. Every
//! comparison is entrywise absolute within the channel's tolerance
//! (default [`DEFAULT_TOL`]).

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::ReversibleChannel;
use crate::classical::{check_wiring, idle_positions, ClassicalChannel};
use crate::error::{invalid, Error, Result};
use crate::system::{split_index_table, CompositeSystem, IndexMap, WireSet};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Matrix unit `|i⟩⟨j|` of side `dim`.
pub fn matrix_unit(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

/// Matrices as rows of `[re, im]` pairs.
pub mod complex_rows {
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::CMatrix;

    pub fn to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .map(|c| [m[(r, c)].re, m[(r, c)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, String> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err("ragged matrix rows".into());
        }
        Ok(CMatrix::from_fn(n, m, |r, c| {
            Complex64::new(rows[r][c][0], rows[r][c][1])
        }))
    }

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }
}

/// A unitary between two composite systems of equal total dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryChannel {
    input: CompositeSystem,
    output: CompositeSystem,
    #[serde(with = "complex_rows")]
    matrix: CMatrix,
    tol: f64,
}

impl UnitaryChannel {
    /// Certifies `‖U†U − I‖_max ≤ 1e-9`.
    pub fn new(input: CompositeSystem, output: CompositeSystem, matrix: CMatrix) -> Result<Self> {
        Self::with_tol(input, output, matrix, DEFAULT_TOL)
    }

    pub fn with_tol(
        input: CompositeSystem,
        output: CompositeSystem,
        matrix: CMatrix,
        tol: f64,
    ) -> Result<Self> {
        let n = input.total_dim();
        if output.total_dim() != n {
            return invalid(format!(
                "reversible channel needs equal dimensions, got {} -> {}",
                n,
                output.total_dim()
            ));
        }
        if matrix.shape() != (n, n) {
            return invalid(format!("matrix is {:?}, expected {n}x{n}", matrix.shape()));
        }
        let deviation = max_abs_diff(&(matrix.adjoint() * &matrix), &CMatrix::identity(n, n));
        if deviation.is_nan() || deviation > tol {
            return Err(Error::Certificate {
                what: "U†U - I".into(),
                deviation,
                tol,
            });
        }
        Ok(UnitaryChannel {
            input,
            output,
            matrix,
            tol,
        })
    }

    /// Same channel with another comparison tolerance.
    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Permutation matrix of a classical reversible channel.
    pub fn from_classical(channel: &ClassicalChannel) -> Self {
        let n = channel.table().len();
        let mut m = CMatrix::zeros(n, n);
        for (x, &y) in channel.table().iter().enumerate() {
            m[(y, x)] = ONE;
        }
        UnitaryChannel {
            input: channel.input().clone(),
            output: channel.output().clone(),
            matrix: m,
            tol: DEFAULT_TOL,
        }
    }

    pub fn controlled_not(input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        Ok(Self::from_classical(&ClassicalChannel::controlled_not(
            input, output,
        )?))
    }

    pub fn swap_gate(input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        Ok(Self::from_classical(&ClassicalChannel::swap_gate(
            input, output,
        )?))
    }

    /// Hadamard on a single qubit.
    pub fn hadamard(input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        if input.dims() != [2] || output.dims() != [2] {
            return invalid("hadamard acts on one qubit");
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
            ],
        );
        Self::new(input, output, m)
    }

    /// Haar-distributed unitary (QR of a complex Gaussian matrix with the
    /// phases of `R`'s diagonal absorbed into `Q`).
    pub fn random<R: Rng + ?Sized>(
        input: CompositeSystem,
        output: CompositeSystem,
        rng: &mut R,
    ) -> Result<Self> {
        let n = input.total_dim();
        let g = CMatrix::from_fn(n, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        });
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for k in 0..n {
            let d = r[(k, k)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
            for row in 0..n {
                q[(row, k)] *= phase;
            }
        }
        Self::new(input, output, q)
    }

    /// `Tr_{outputs ∖ keep}[U |a⟩⟨b| U†]` for input basis indices `a`, `b`.
    pub(crate) fn reduced_image(&self, a: usize, b: usize, keep: &OutputSplit) -> CMatrix {
        let ca = self.matrix.column(a);
        let cb = self.matrix.column(b);
        let nk = keep.table.len();
        CMatrix::from_fn(nk, nk, |y, y2| {
            keep.table[y]
                .iter()
                .zip(&keep.table[y2])
                .map(|(&o1, &o2)| ca[o1] * cb[o2].conj())
                .sum()
        })
    }

    /// First matrix-unit pair breaking the no-signalling identity, if any.
    pub fn signalling_defect(
        &self,
        from_in: &WireSet,
        to_out: &WireSet,
    ) -> Result<Option<SignallingDefect>> {
        let from = from_in.resolve(&self.input)?;
        let rest = from_in.complement_positions(&self.input)?;
        let inputs = split_index_table(&self.input, &from, &rest);
        let keep = OutputSplit::new(&self.output, to_out)?;
        let (nf, nr) = (inputs.len(), inputs[0].len());
        let reference: Vec<Vec<CMatrix>> = (0..nr)
            .map(|k| {
                (0..nr)
                    .map(|l| self.reduced_image(inputs[0][k], inputs[0][l], &keep))
                    .collect()
            })
            .collect();
        let zero = CMatrix::zeros(keep.table.len(), keep.table.len());
        for i in 0..nf {
            for j in 0..nf {
                for k in 0..nr {
                    for l in 0..nr {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let image = self.reduced_image(inputs[i][k], inputs[j][l], &keep);
                        let expected = if i == j { &reference[k][l] } else { &zero };
                        let deviation = max_abs_diff(&image, expected);
                        if deviation > self.tol {
                            return Ok(Some(SignallingDefect {
                                from_unit: (i, j),
                                rest_unit: (k, l),
                                deviation,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Deviation of one matrix-unit pair from the no-signalling identity.
    pub fn signalling_deviation(
        &self,
        from_in: &WireSet,
        to_out: &WireSet,
        from_unit: (usize, usize),
        rest_unit: (usize, usize),
    ) -> Result<f64> {
        let from = from_in.resolve(&self.input)?;
        let rest = from_in.complement_positions(&self.input)?;
        let inputs = split_index_table(&self.input, &from, &rest);
        let keep = OutputSplit::new(&self.output, to_out)?;
        let ((i, j), (k, l)) = (from_unit, rest_unit);
        if i.max(j) >= inputs.len() || k.max(l) >= inputs[0].len() {
            return invalid("matrix unit out of range");
        }
        let image = self.reduced_image(inputs[i][k], inputs[j][l], &keep);
        let expected = if i == j {
            self.reduced_image(inputs[0][k], inputs[0][l], &keep)
        } else {
            CMatrix::zeros(keep.table.len(), keep.table.len())
        };
        Ok(max_abs_diff(&image, &expected))
    }

    /// Either the factor `W` with `U = W ⊗ I_idle`, or the first entry that
    /// breaks the pattern.
    pub fn factor_check(&self, idle: &WireSet) -> Result<FactorCheck> {
        let (idle_in, idle_out) = idle_positions(&self.input, &self.output, idle)?;
        let rest_in = idle.complement_positions(&self.input)?;
        let rest_out = idle.complement_positions(&self.output)?;
        let w_input = self.input.select(&rest_in);
        let w_output = self.output.select(&rest_out);
        if w_input.total_dim() != w_output.total_dim() {
            return Ok(FactorCheck::Defect(FactorizationDefect {
                row: 0,
                col: 0,
                expected: ZERO,
                found: ZERO,
            }));
        }
        let ins = split_index_table(&self.input, &rest_in, &idle_in);
        let outs = split_index_table(&self.output, &rest_out, &idle_out);
        let nw = ins.len();
        let ny = ins[0].len();
        let w = CMatrix::from_fn(nw, nw, |x, x2| self.matrix[(outs[x][0], ins[x2][0])]);
        for x in 0..nw {
            for y in 0..ny {
                for x2 in 0..nw {
                    for y2 in 0..ny {
                        let expected = if y == y2 { w[(x, x2)] } else { ZERO };
                        let (row, col) = (outs[x][y], ins[x2][y2]);
                        let found = self.matrix[(row, col)];
                        if (found - expected).norm() > self.tol {
                            return Ok(FactorCheck::Defect(FactorizationDefect {
                                row,
                                col,
                                expected,
                                found,
                            }));
                        }
                    }
                }
            }
        }
        match UnitaryChannel::with_tol(w_input, w_output, w, self.tol) {
            Ok(w) => Ok(FactorCheck::Factor(w)),
            Err(_) => Ok(FactorCheck::Defect(FactorizationDefect {
                row: 0,
                col: 0,
                expected: ONE,
                found: ZERO,
            })),
        }
    }

    /// `Tr_{A}[U(E_ij ⊗ E_kl)U†] = δ_ij E_kl` on every matrix unit, where `A`
    /// is `discarded` and the other wires carry the same names in and out.
    pub fn discarding_leaves_identity(&self, discarded: &WireSet) -> Result<bool> {
        let kept = discarded.complement(&self.input)?;
        let (keep_in, keep_out) = idle_positions(&self.input, &self.output, &kept)?;
        let disc_in = discarded.resolve(&self.input)?;
        let inputs = split_index_table(&self.input, &disc_in, &keep_in);
        let keep = OutputSplit::from_positions(&self.output, &keep_out);
        let (nd, nk) = (inputs.len(), inputs[0].len());
        for i in 0..nd {
            for j in 0..nd {
                for k in 0..nk {
                    for l in 0..nk {
                        let image = self.reduced_image(inputs[i][k], inputs[j][l], &keep);
                        let expected = if i == j {
                            matrix_unit(nk, k, l)
                        } else {
                            CMatrix::zeros(nk, nk)
                        };
                        if max_abs_diff(&image, &expected) > self.tol {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `U ρ U†` for an operator on the input space.
    pub fn conjugate(&self, rho: &CMatrix) -> CMatrix {
        &self.matrix * rho * self.matrix.adjoint()
    }
}

/// The output wires kept by a partial trace: `table[y][c]` is the joint
/// output index with kept digits `y` and traced digits `c`.
#[derive(Debug, Clone)]
pub(crate) struct OutputSplit {
    pub(crate) table: Vec<Vec<usize>>,
}

impl OutputSplit {
    pub(crate) fn new(system: &CompositeSystem, keep: &WireSet) -> Result<Self> {
        let kept = keep.resolve(system)?;
        let traced = keep.complement_positions(system)?;
        Ok(OutputSplit {
            table: split_index_table(system, &kept, &traced),
        })
    }

    /// Keep the parts at `kept`, in that order.
    pub(crate) fn from_positions(system: &CompositeSystem, kept: &[usize]) -> Self {
        let traced: Vec<usize> = (0..system.len()).filter(|k| !kept.contains(k)).collect();
        OutputSplit {
            table: split_index_table(system, kept, &traced),
        }
    }
}

/// Matrix-unit pair `(E_ij on from_in) ⊗ (E_kl on the rest)` whose reduced
/// image differs from what no-signalling requires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignallingDefect {
    pub from_unit: (usize, usize),
    pub rest_unit: (usize, usize),
    pub deviation: f64,
}

/// Entry of a unitary that breaks the `W ⊗ I` pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationDefect {
    pub row: usize,
    pub col: usize,
    pub expected: Complex64,
    pub found: Complex64,
}

#[derive(Debug, Clone)]
pub enum FactorCheck {
    Factor(UnitaryChannel),
    Defect(FactorizationDefect),
}

impl ReversibleChannel for UnitaryChannel {
    fn input(&self) -> &CompositeSystem {
        &self.input
    }

    fn output(&self) -> &CompositeSystem {
        &self.output
    }

    fn identity(system: &CompositeSystem) -> Self {
        let n = system.total_dim();
        UnitaryChannel {
            input: system.clone(),
            output: system.clone(),
            matrix: CMatrix::identity(n, n),
            tol: DEFAULT_TOL,
        }
    }

    fn wiring(
        input: &CompositeSystem,
        output: &CompositeSystem,
        sources: &[usize],
    ) -> Result<Self> {
        check_wiring(input, output, sources)?;
        let map = IndexMap::new(input, sources);
        let n = input.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for x in 0..n {
            m[(map.apply(x), x)] = ONE;
        }
        Ok(UnitaryChannel {
            input: input.clone(),
            output: output.clone(),
            matrix: m,
            tol: DEFAULT_TOL,
        })
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        if first.output.dims() != self.input.dims() {
            return invalid(format!(
                "cannot compose: {} feeds {}",
                first.output, self.input
            ));
        }
        UnitaryChannel::with_tol(
            first.input.clone(),
            self.output.clone(),
            &self.matrix * &first.matrix,
            self.tol.max(first.tol),
        )
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(UnitaryChannel {
            input: self.input.concat(&other.input)?,
            output: self.output.concat(&other.output)?,
            matrix: self.matrix.kronecker(&other.matrix),
            tol: self.tol.max(other.tol),
        })
    }

    fn inverse(&self) -> Self {
        UnitaryChannel {
            input: self.output.clone(),
            output: self.input.clone(),
            matrix: self.matrix.adjoint(),
            tol: self.tol,
        }
    }

    fn relabel(&self, input: CompositeSystem, output: CompositeSystem) -> Result<Self> {
        if !input.same_shape(&self.input) || !output.same_shape(&self.output) {
            return invalid("relabelling must keep the wire dimensions");
        }
        Ok(UnitaryChannel {
            input,
            output,
            matrix: self.matrix.clone(),
            tol: self.tol,
        })
    }

    /// Matrix-unit test: for all `E_ij` on `from_in` and `E_kl` on the rest,
    /// `Tr_c[U (E_ij ⊗ E_kl) U†] = δ_ij Tr_c[U (E_00 ⊗ E_kl) U†]`, with `c`
    /// the complement of `to_out`.
    fn signals(&self, from_in: &WireSet, to_out: &WireSet) -> Result<bool> {
        Ok(self.signalling_defect(from_in, to_out)?.is_some())
    }

    fn factors_as_identity(&self, idle: &WireSet) -> Result<Option<Self>> {
        Ok(match self.factor_check(idle)? {
            FactorCheck::Factor(w) => Some(w),
            FactorCheck::Defect(_) => None,
        })
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.input == other.input
            && self.output == other.output
            && max_abs_diff(&self.matrix, &other.matrix) <= self.tol.max(other.tol)
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    system: CompositeSystem,
    #[serde(with = "complex_rows")]
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(system: CompositeSystem, matrix: CMatrix) -> Result<Self> {
        Self::with_tol(system, matrix, DEFAULT_TOL)
    }

    pub fn with_tol(system: CompositeSystem, matrix: CMatrix, tol: f64) -> Result<Self> {
        let n = system.total_dim();
        if matrix.shape() != (n, n) {
            return invalid(format!(
                "density matrix is {:?}, expected {n}x{n}",
                matrix.shape()
            ));
        }
        let herm = max_abs_diff(&matrix, &matrix.adjoint());
        if herm > tol {
            return Err(Error::Certificate {
                what: "ρ - ρ†".into(),
                deviation: herm,
                tol,
            });
        }
        let trace_dev = (matrix.trace() - ONE).norm();
        if trace_dev > tol {
            return Err(Error::Certificate {
                what: "Tr ρ - 1".into(),
                deviation: trace_dev,
                tol,
            });
        }
        let min_eig = min_eigenvalue(&matrix);
        if min_eig < -tol {
            return Err(Error::Certificate {
                what: "negative eigenvalue".into(),
                deviation: -min_eig,
                tol,
            });
        }
        Ok(DensityOperator { system, matrix })
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` need not be normalized.
    pub fn pure(system: CompositeSystem, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return invalid("zero vector is not a state");
        }
        let v = v / Complex64::new(norm, 0.0);
        Self::new(system, &v * v.adjoint())
    }

    /// Computational basis state.
    pub fn basis(system: CompositeSystem, index: usize) -> Result<Self> {
        let n = system.total_dim();
        if index >= n {
            return Err(Error::Index {
                position: 0,
                value: index,
                dim: n,
            });
        }
        Ok(DensityOperator {
            matrix: matrix_unit(n, index, index),
            system,
        })
    }

    pub fn maximally_mixed(system: CompositeSystem) -> Self {
        let n = system.total_dim();
        let matrix = CMatrix::identity(n, n) / Complex64::new(n as f64, 0.0);
        DensityOperator { system, matrix }
    }

    pub fn system(&self) -> &CompositeSystem {
        &self.system
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        Ok(DensityOperator {
            system: self.system.concat(&other.system)?,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Partial trace of an arbitrary operator on `system`, keeping the parts in
/// `keep` (in system order).
pub fn partial_trace_operator(
    system: &CompositeSystem,
    m: &CMatrix,
    keep: &WireSet,
) -> Result<CMatrix> {
    let split = OutputSplit::new(system, keep)?;
    let nk = split.table.len();
    Ok(CMatrix::from_fn(nk, nk, |y, y2| {
        split.table[y]
            .iter()
            .zip(&split.table[y2])
            .map(|(&a, &b)| m[(a, b)])
            .sum()
    }))
}

/// Reduced state on `keep`.
pub fn partial_trace(rho: &DensityOperator, keep: &WireSet) -> Result<DensityOperator> {
    let positions = keep.resolve(&rho.system)?;
    let matrix = partial_trace_operator(&rho.system, &rho.matrix, keep)?;
    Ok(DensityOperator {
        system: rho.system.select(&positions),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubits(names: &[&str]) -> CompositeSystem {
        CompositeSystem::from_pairs(&names.iter().map(|n| (*n, 2)).collect::<Vec<_>>()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cnot_squares_to_identity_and_is_self_adjoint() {
        let ab = qubits(&["A", "B"]);
        let k = UnitaryChannel::controlled_not(ab.clone(), ab.clone()).unwrap();
        assert!(k
            .compose(&k)
            .unwrap()
            .approx_eq(&UnitaryChannel::identity(&ab)));
        assert!(k.inverse().approx_eq(&k));
    }

    #[test]
    fn hadamard_tensor_identity_squares_to_identity() {
        let h = UnitaryChannel::hadamard(qubits(&["A"]), qubits(&["A"])).unwrap();
        let hi = h
            .tensor(&UnitaryChannel::identity(&qubits(&["B"])))
            .unwrap();
        let sq = hi.compose(&hi).unwrap();
        assert!(max_abs_diff(sq.matrix(), &CMatrix::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn random_unitaries_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sys = qubits(&["A", "B", "C"]);
        let u = UnitaryChannel::random(sys.clone(), sys.clone(), &mut rng).unwrap();
        let uu = u.compose(&u.inverse()).unwrap();
        assert!(max_abs_diff(uu.matrix(), &CMatrix::identity(8, 8)) <= 1e-9);
    }

    #[test]
    fn rejects_non_unitary() {
        let a = qubits(&["A"]);
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(
            UnitaryChannel::new(a.clone(), a, m),
            Err(Error::Certificate { .. })
        ));
    }

    #[test]
    fn identity_tensor_identity() {
        let i = UnitaryChannel::identity(&qubits(&["A"]))
            .tensor(&UnitaryChannel::identity(&qubits(&["B"])))
            .unwrap();
        assert!(max_abs_diff(i.matrix(), &CMatrix::identity(4, 4)) == 0.0);
    }

    #[test]
    fn partial_trace_examples() {
        let a = qubits(&["A"]);
        let b = qubits(&["B"]);
        let rho = DensityOperator::pure(a, &[c(1.0), c(2.0)]).unwrap();
        let sigma = DensityOperator::pure(b, &[c(1.0), Complex64::new(0.0, 1.0)]).unwrap();
        let prod = rho.tensor(&sigma).unwrap();
        let red = partial_trace(&prod, &WireSet::single("B")).unwrap();
        assert!(max_abs_diff(red.matrix(), sigma.matrix()) < 1e-12);

        let bell =
            DensityOperator::pure(qubits(&["A", "B"]), &[c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let red = partial_trace(&bell, &WireSet::single("A")).unwrap();
        let half = CMatrix::identity(2, 2) * c(0.5);
        assert!(max_abs_diff(red.matrix(), &half) < 1e-12);

        let all = partial_trace(&bell, &WireSet::parse_list("A,B")).unwrap();
        assert!(max_abs_diff(all.matrix(), bell.matrix()) == 0.0);
        assert!(partial_trace(&bell, &WireSet::single("Z")).is_err());
    }

    #[test]
    fn signalling_examples() {
        let ab = qubits(&["A", "B"]);
        let out = qubits(&["A'", "B'"]);
        let s = |u: &UnitaryChannel, f: &str, t: &str| {
            u.signals(&WireSet::single(f), &WireSet::single(t)).unwrap()
        };
        let k = UnitaryChannel::controlled_not(ab.clone(), out.clone()).unwrap();
        assert!(s(&k, "B", "A'"), "kickback");
        let id = UnitaryChannel::identity(&ab)
            .relabel(ab.clone(), out.clone())
            .unwrap();
        assert!(!s(&id, "A", "B'"));
        assert!(!s(&id, "B", "A'"));
        let sw = UnitaryChannel::swap_gate(ab, out).unwrap();
        assert!(s(&sw, "A", "B'"));
        assert!(!s(&sw, "A", "A'"));
    }

    #[test]
    fn factorization_examples() {
        let h = UnitaryChannel::hadamard(qubits(&["A"]), qubits(&["A"])).unwrap();
        let hi = h
            .tensor(&UnitaryChannel::identity(&qubits(&["B"])))
            .unwrap();
        let w = hi
            .factors_as_identity(&WireSet::single("B"))
            .unwrap()
            .unwrap();
        assert!(w.approx_eq(&h));

        let ab = qubits(&["A", "B"]);
        let k = UnitaryChannel::controlled_not(ab.clone(), ab.clone()).unwrap();
        assert!(k
            .factors_as_identity(&WireSet::single("B"))
            .unwrap()
            .is_none());

        let id = UnitaryChannel::identity(&ab);
        let w = id.factors_as_identity(&WireSet::all(&ab)).unwrap().unwrap();
        assert_eq!(w.matrix().shape(), (1, 1));
        assert!((w.matrix()[(0, 0)] - ONE).norm() == 0.0);
    }

    #[test]
    fn discarding_premise() {
        let ab = qubits(&["A", "B"]);
        let id = UnitaryChannel::identity(&ab);
        assert!(id
            .discarding_leaves_identity(&WireSet::single("A"))
            .unwrap());
        let k = UnitaryChannel::controlled_not(ab.clone(), ab).unwrap();
        assert!(!k.discarding_leaves_identity(&WireSet::single("A")).unwrap());
    }

    fn arb_unitary() -> impl Strategy<Value = UnitaryChannel> {
        any::<u64>().prop_map(|seed| {
            let ab = qubits(&["A", "B"]);
            UnitaryChannel::random(ab.clone(), ab, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        })
    }

    fn local(seed: u64, name: &str) -> UnitaryChannel {
        let s = qubits(&[name]);
        UnitaryChannel::random(s.clone(), s, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn dagger_inverts(u in arb_unitary()) {
            let p = u.inverse().compose(&u).unwrap();
            prop_assert!(max_abs_diff(p.matrix(), &CMatrix::identity(4, 4)) <= 1e-9);
        }

        #[test]
        fn partial_trace_keeps_trace_and_positivity(u in arb_unitary()) {
            let ab = qubits(&["A", "B"]);
            let rho = DensityOperator::basis(ab.clone(), 1).unwrap();
            let evolved = DensityOperator::new(ab, u.conjugate(rho.matrix())).unwrap();
            let red = partial_trace(&evolved, &WireSet::single("B")).unwrap();
            prop_assert!((red.matrix().trace() - ONE).norm() <= 1e-9);
            prop_assert!(red.min_eigenvalue() >= -1e-8);
        }

        #[test]
        fn signalling_invariant_under_local_unitaries(u in arb_unitary(), s1 in any::<u64>(), s2 in any::<u64>()) {
            // Controlled-phase family gives both signalling and non-signalling cases.
            let ab = qubits(&["A", "B"]);
            let cases = [u, UnitaryChannel::controlled_not(ab.clone(), ab.clone()).unwrap(), UnitaryChannel::identity(&ab)];
            for base in cases {
                for (from, to) in [("A", "A"), ("A", "B"), ("B", "A"), ("B", "B")] {
                    let rest_in = if from == "A" { "B" } else { "A" };
                    let pre = embed_local(&local(s1, rest_in), &ab);
                    let post = embed_local(&local(s2, to), &ab);
                    let dressed = post.compose(&base.compose(&pre).unwrap()).unwrap();
                    let f = WireSet::single(from);
                    let t = WireSet::single(to);
                    prop_assert_eq!(base.signals(&f, &t).unwrap(), dressed.signals(&f, &t).unwrap());
                }
            }
        }

        #[test]
        fn factor_reassembles(seed in any::<u64>()) {
            let w = local(seed, "A");
            let u = w.tensor(&UnitaryChannel::identity(&qubits(&["B"]))).unwrap()
                .reorder_inputs(&["B", "A"]).unwrap().reorder_outputs(&["B", "A"]).unwrap();
            let got = u.factors_as_identity(&WireSet::single("B")).unwrap().unwrap();
            let rebuilt = got.tensor(&UnitaryChannel::identity(&qubits(&["B"]))).unwrap()
                .reorder_inputs(&["B", "A"]).unwrap().reorder_outputs(&["B", "A"]).unwrap();
            prop_assert!(max_abs_diff(rebuilt.matrix(), u.matrix()) <= 1e-9);
        }
    }

    fn embed_local(u: &UnitaryChannel, target: &CompositeSystem) -> UnitaryChannel {
        crate::channel::embed(u, target).unwrap()
    }
}
