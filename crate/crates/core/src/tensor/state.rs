use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::eig::{hermitian_eig, normalize_phase, psd_sqrt, HERMITIAN_TOL};
use super::layout::{deposit, extract, Party, Register, RegisterLayout, Split};
use super::matrix::{c64, inner, norm, Matrix, C64};
use super::svd::{svd, trace_norm};
use crate::error::{Error, Result};

/// Tolerance used when validating norms, traces and unitaries.
pub const STATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
    layout: RegisterLayout,
}

impl PureState {
    pub fn new(amps: Vec<C64>, layout: RegisterLayout) -> Result<Self> {
        layout.check_capacity()?;
        if amps.len() != layout.dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                layout.total_qubits()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Dimension("non-finite amplitude".into()));
        }
        let n = norm(&amps);
        if (n * n - 1.0).abs() > STATE_TOL {
            return Err(Error::Dimension(format!("squared norm {} is not 1", n * n)));
        }
        Ok(Self { amps, layout })
    }

    /// Normalizes `amps` before validating.
    pub fn normalized(mut amps: Vec<C64>, layout: RegisterLayout) -> Result<Self> {
        let n = norm(&amps);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Dimension("zero vector".into()));
        }
        for a in &mut amps {
            *a /= n;
        }
        Self::new(amps, layout)
    }

    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        layout.check_capacity()?;
        let dim = layout.dim();
        if index >= dim {
            return Err(Error::Dimension(format!("basis index {index} out of {dim}")));
        }
        let mut amps = vec![C64::zero(); dim];
        amps[index] = c64(1.0, 0.0);
        Ok(Self { amps, layout })
    }

    /// Basis state with the given registers set to the given values; others are zero.
    pub fn from_values(layout: RegisterLayout, values: &[(&str, usize)]) -> Result<Self> {
        let n = layout.total_qubits();
        let mut index = 0;
        for (name, v) in values {
            let pos = layout.positions(&[*name])?;
            if *v >= 1usize << pos.len() {
                return Err(Error::Dimension(format!("value {v} does not fit `{name}`")));
            }
            index |= deposit(*v, &pos, n);
        }
        Self::basis(layout, index)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_shape(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.layout.names() != other.layout.names() || self.amps.len() != other.amps.len() {
            return Err(Error::Dimension("states have different layouts".into()));
        }
        Ok(())
    }

    /// `‖|a⟩⟨a| − |b⟩⟨b|‖₁ = 2√(1 − |⟨a|b⟩|²)`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let f = self.inner(other)?.norm_sqr().min(1.0);
        Ok(2.0 * libm::sqrt(1.0 - f))
    }

    /// Applies `u` to the named registers; the first target holds the most significant bits.
    pub fn apply_gate<S: AsRef<str>>(&self, u: &Matrix, targets: &[S]) -> Result<Self> {
        let pos = self.layout.positions(targets)?;
        let d = 1usize << pos.len();
        if u.rows() != d || u.cols() != d {
            return Err(Error::Dimension(format!(
                "{}x{} gate on {} qubits",
                u.rows(),
                u.cols(),
                pos.len()
            )));
        }
        u.require_unitary(STATE_TOL)?;
        let split = Split::new(&pos, self.num_qubits());
        let mut out = vec![C64::zero(); self.amps.len()];
        let mut col = vec![C64::zero(); d];
        for r in 0..split.rest.len() {
            for (t, c) in col.iter_mut().enumerate() {
                *c = self.amps[split.index(t, r)];
            }
            for i in 0..d {
                let row = u.row(i);
                let mut acc = C64::zero();
                for (a, b) in row.iter().zip(&col) {
                    acc += a * b;
                }
                out[split.index(i, r)] = acc;
            }
        }
        Ok(Self {
            amps: out,
            layout: self.layout.clone(),
        })
    }

    /// Basis permutation `|j⟩ ↦ |perm[j]⟩` on the named registers.
    pub fn apply_permutation<S: AsRef<str>>(&self, perm: &[usize], targets: &[S]) -> Result<Self> {
        let pos = self.layout.positions(targets)?;
        check_permutation(perm, 1usize << pos.len())?;
        let split = Split::new(&pos, self.num_qubits());
        let mut out = vec![C64::zero(); self.amps.len()];
        for r in 0..split.rest.len() {
            for (j, &pj) in perm.iter().enumerate() {
                out[split.index(pj, r)] = self.amps[split.index(j, r)];
            }
        }
        Ok(Self {
            amps: out,
            layout: self.layout.clone(),
        })
    }

    /// Applies `branches[c]` to `targets` when the `controls` registers hold value `c`.
    pub fn apply_controlled<S: AsRef<str>, T: AsRef<str>>(
        &self,
        controls: &[S],
        branches: &[Matrix],
        targets: &[T],
    ) -> Result<Self> {
        let cpos = self.layout.positions(controls)?;
        let tpos = self.layout.positions(targets)?;
        if cpos.iter().any(|p| tpos.contains(p)) {
            return Err(Error::Dimension("control and target registers overlap".into()));
        }
        let nc = 1usize << cpos.len();
        if branches.len() != nc {
            return Err(Error::Dimension(format!(
                "{} branches for {} control values",
                branches.len(),
                nc
            )));
        }
        let d = 1usize << tpos.len();
        for b in branches {
            if b.rows() != d || b.cols() != d {
                return Err(Error::Dimension("branch gate has wrong size".into()));
            }
            b.require_unitary(STATE_TOL)?;
        }
        let n = self.num_qubits();
        let split = Split::new(&tpos, n);
        let mut out = vec![C64::zero(); self.amps.len()];
        let mut col = vec![C64::zero(); d];
        for r in 0..split.rest.len() {
            let c = extract(split.rest[r], &cpos, n);
            let u = &branches[c];
            for (t, x) in col.iter_mut().enumerate() {
                *x = self.amps[split.index(t, r)];
            }
            for i in 0..d {
                let mut acc = C64::zero();
                for (a, b) in u.row(i).iter().zip(&col) {
                    acc += a * b;
                }
                out[split.index(i, r)] = acc;
            }
        }
        Ok(Self {
            amps: out,
            layout: self.layout.clone(),
        })
    }

    /// Reduced density matrix on `keep` (kept in layout order).
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let sub = self.layout.select(keep)?;
        let kept = sub.names();
        let pos = self.layout.positions(&kept)?;
        let split = Split::new(&pos, self.num_qubits());
        let d = split.targets.len();
        let mut m = Matrix::zeros(d, d);
        for r in 0..split.rest.len() {
            for a in 0..d {
                let va = self.amps[split.index(a, r)];
                if va.is_zero() {
                    continue;
                }
                for b in 0..d {
                    m[(a, b)] += va * self.amps[split.index(b, r)].conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(m, sub))
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(Matrix::outer(&self.amps, &self.amps), self.layout.clone())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        layout.check_capacity()?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { amps, layout })
    }

    /// Same state with registers reordered.
    pub fn permute<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.layout.registers().len() {
            return Err(Error::Dimension("reorder must list every register".into()));
        }
        let layout = self.layout.reorder(order)?;
        let pos = self.layout.positions(order)?;
        let n = self.num_qubits();
        let mut amps = vec![C64::zero(); self.amps.len()];
        for (j, a) in amps.iter_mut().enumerate() {
            *a = self.amps[deposit(j, &pos, n)];
        }
        Ok(Self { amps, layout })
    }

    /// Global phase fixed so the first nonzero amplitude is real and nonnegative.
    pub fn canonical_phase(&self) -> Self {
        let mut amps = self.amps.clone();
        normalize_phase(&mut amps);
        Self {
            amps,
            layout: self.layout.clone(),
        }
    }

    /// Outcome distribution of a computational-basis measurement of `regs`.
    pub fn probabilities<S: AsRef<str>>(&self, regs: &[S]) -> Result<Vec<f64>> {
        let pos = self.layout.positions(regs)?;
        let n = self.num_qubits();
        let mut p = vec![0.0; 1usize << pos.len()];
        for (i, a) in self.amps.iter().enumerate() {
            p[extract(i, &pos, n)] += a.norm_sqr();
        }
        Ok(p)
    }

    pub fn with_layout(&self, layout: RegisterLayout) -> Result<Self> {
        if layout.total_qubits() != self.num_qubits() {
            return Err(Error::Dimension("layout size changed".into()));
        }
        Ok(Self {
            amps: self.amps.clone(),
            layout,
        })
    }

    pub fn with_owner(&self, name: &str, owner: Party) -> Result<Self> {
        Ok(Self {
            amps: self.amps.clone(),
            layout: self.layout.with_owner(name, owner)?,
        })
    }
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    if perm.len() != d {
        return Err(Error::Dimension(format!("permutation of {} on {d} states", perm.len())));
    }
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || seen[p] {
            return Err(Error::Dimension("not a permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: Matrix,
    layout: RegisterLayout,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within `1e-9`.
    pub fn new(m: Matrix, layout: RegisterLayout) -> Result<Self> {
        layout.check_capacity()?;
        if m.rows() != layout.dim() || m.cols() != layout.dim() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} qubits",
                m.rows(),
                m.cols(),
                layout.total_qubits()
            )));
        }
        let dev = m.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidDensity(format!("trace {}", tr.re)));
        }
        let min = hermitian_eig(&m)?.values.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { m, layout })
    }

    pub(crate) fn from_parts(m: Matrix, layout: RegisterLayout) -> Self {
        Self { m, layout }
    }

    /// Diagonal state `Σ p_i |i⟩⟨i|`.
    pub fn diagonal(p: &[f64], layout: RegisterLayout) -> Result<Self> {
        Self::new(Matrix::diag(p), layout)
    }

    /// `Σ w_i ρ_i`; weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidDensity("empty mixture".into()))?;
        if weights.len() != states.len() {
            return Err(Error::Dimension("weights and states differ in length".into()));
        }
        let mut m = Matrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.layout.names() != first.layout.names() {
                return Err(Error::Dimension("mixture of different layouts".into()));
            }
            m = m.add(&s.m.scale_real(*w))?;
        }
        Ok(Self::from_parts(m, first.layout.clone()))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.m)?.values)
    }

    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let sub = self.layout.select(keep)?;
        let kept = sub.names();
        let pos = self.layout.positions(&kept)?;
        let split = Split::new(&pos, self.layout.total_qubits());
        let d = split.targets.len();
        let mut m = Matrix::zeros(d, d);
        for r in 0..split.rest.len() {
            for a in 0..d {
                for b in 0..d {
                    m[(a, b)] += self.m[(split.index(a, r), split.index(b, r))];
                }
            }
        }
        Ok(Self::from_parts(m, sub))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        layout.check_capacity()?;
        Ok(Self::from_parts(self.m.kron(&other.m), layout))
    }

    /// `‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension("states of different dimension".into()));
        }
        trace_norm(&self.m.sub(&other.m)?)
    }

    /// Outcome distribution of a computational-basis measurement of `regs`.
    pub fn probabilities<S: AsRef<str>>(&self, regs: &[S]) -> Result<Vec<f64>> {
        let red = self.partial_trace(regs)?;
        // partial_trace keeps layout order; read bits back in the requested order.
        let pos = red.layout.positions(regs)?;
        let n = red.layout.total_qubits();
        let mut p = vec![0.0; red.dim()];
        for i in 0..red.dim() {
            p[extract(i, &pos, n)] += red.m[(i, i)].re;
        }
        Ok(p)
    }

    /// Checks the density-matrix invariants, returning the worst deviation found.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.m.clone(), self.layout.clone()).map(|_| ())
    }
}

/// Either kind of quantum object, or a bare operator.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumObject {
    Pure(PureState),
    Density(DensityMatrix),
    Operator(Matrix),
}

/// Kronecker product of two objects of the same kind; layouts are concatenated.
pub fn tensor_product(a: &QuantumObject, b: &QuantumObject) -> Result<QuantumObject> {
    match (a, b) {
        (QuantumObject::Pure(x), QuantumObject::Pure(y)) => Ok(QuantumObject::Pure(x.tensor(y)?)),
        (QuantumObject::Density(x), QuantumObject::Density(y)) => {
            Ok(QuantumObject::Density(x.tensor(y)?))
        }
        (QuantumObject::Operator(x), QuantumObject::Operator(y)) => {
            Ok(QuantumObject::Operator(x.kron(y)))
        }
        _ => Err(Error::KindMismatch(
            "tensor product needs two objects of the same kind".into(),
        )),
    }
}

/// Canonical purification `Σ √λ_i |e_i⟩|i⟩` on `H ⊗ H'`, where each register
/// `r` of `H` gets a twin `r'` owned by the same party.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    rho.validate()?;
    let e = hermitian_eig(rho.matrix())?;
    let d = rho.dim();
    let mut regs: Vec<Register> = rho.layout().registers().to_vec();
    for r in rho.layout().registers() {
        let mut name = String::from(r.name.as_str());
        name.push('\'');
        regs.push(Register::new(name, r.qubits, r.owner));
    }
    let layout = RegisterLayout::new(regs)?;
    layout.check_capacity()?;
    let mut amps = vec![C64::zero(); d * d];
    for (i, &lam) in e.values.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = libm::sqrt(lam);
        for h in 0..d {
            amps[h * d + i] += e.vectors[(h, i)] * s;
        }
    }
    Ok(PureState::normalized(amps, layout)?.canonical_phase())
}

/// Uhlmann fidelity `‖√ρ √σ‖₁`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let a = psd_sqrt(rho.matrix())?;
    let b = psd_sqrt(sigma.matrix())?;
    trace_norm(&a.mul(&b)?)
}

/// Output of [`max_overlap_local_unitary`].
#[derive(Debug, Clone)]
pub struct LocalTransition {
    /// Unitary on the local registers, in the order they were given.
    pub unitary: Matrix,
    pub local: Vec<String>,
    /// `|⟨φ₁|(I ⊗ U)|φ₂⟩|`, which is real and nonnegative for the returned `U`.
    pub overlap: f64,
}

/// Finds the unitary on `local` maximizing `|⟨φ₁|(I ⊗ U)|φ₂⟩|`.
pub fn max_overlap_local_unitary<S: AsRef<str>>(
    phi1: &PureState,
    phi2: &PureState,
    local: &[S],
) -> Result<LocalTransition> {
    phi1.same_shape(phi2)?;
    if local.is_empty() {
        return Err(Error::Dimension("local register set is empty".into()));
    }
    let layout = phi1.layout();
    let n = layout.total_qubits();
    let kpos = layout.positions(local)?;
    let split = Split::new(&kpos, n);
    let dk = split.targets.len();
    let dh = split.rest.len();
    // N[k'][k] = Σ_h φ₂[h,k'] conj(φ₁[h,k]); the overlap is Tr(U N).
    let mut nm = Matrix::zeros(dk, dk);
    for h in 0..dh {
        for k2 in 0..dk {
            let b = phi2.amps[split.index(k2, h)];
            if b.is_zero() {
                continue;
            }
            for k1 in 0..dk {
                nm[(k2, k1)] += b * phi1.amps[split.index(k1, h)].conj();
            }
        }
    }
    let dec = svd(&nm)?;
    let unitary = dec.v.mul(&dec.u.adjoint())?;
    let overlap = dec.s.iter().sum::<f64>().min(1.0);
    Ok(LocalTransition {
        unitary,
        local: local.iter().map(|s| String::from(s.as_ref())).collect(),
        overlap,
    })
}
