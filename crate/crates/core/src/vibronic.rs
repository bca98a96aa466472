//! Exact diagonalization of the quadratic E⊗e dynamic Jahn-Teller
//! Hamiltonian and the Ham reduction factor of its ground vibronic doublet.
//!
//! The phonon space uses circular modes `a± = (a_x ∓ i a_y)/√2`; `|n, m⟩`
//! holds `n` quanta of `a₊` and `m` of `a₋`, truncated at `n + m ≤ N`.
//! Electronic states are the complex components `E± = (θ ± iε)/√2`. In this
//! basis the coupling only connects `E−` to `E+` through
//!
//! ```text
//! ⟨E+|H|E−⟩ = F (a₊ + a₋†) + G (a₋ + a₊†)²
//! ```
//!
//! so `2J = 2(n − m) ± 1` is conserved modulo 6 and all matrix elements are
//! real. The Cartesian assembly in [`build_hamiltonian_cartesian`] spans the
//! same truncated space and is kept as an independent cross-check.

use num_complex::Complex64;

use crate::apes::JTCoupling;
use crate::eigen::{eigh, CMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Electronic {
    /// L_z = +1 component.
    Plus,
    /// L_z = −1 component.
    Minus,
}

impl Electronic {
    pub fn sign(self) -> f64 {
        match self {
            Electronic::Plus => 1.0,
            Electronic::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Electronic::Plus => Electronic::Minus,
            Electronic::Minus => Electronic::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VibronicState {
    pub electronic: Electronic,
    /// Quanta in a₊.
    pub n: usize,
    /// Quanta in a₋.
    pub m: usize,
}

impl VibronicState {
    /// `2J mod 6`, one of 1, 3 or 5; conserved by the Hamiltonian.
    pub fn symmetry_class(&self) -> i64 {
        let twice_j = 2 * (self.n as i64 - self.m as i64) + self.electronic.sign() as i64;
        twice_j.rem_euclid(6)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VibronicBasis {
    cutoff: usize,
    states: Vec<VibronicState>,
}

impl VibronicBasis {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn states(&self) -> &[VibronicState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Number of phonon states per electronic branch.
    pub fn phonon_states(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 2) / 2
    }

    pub fn index_of(&self, electronic: Electronic, n: usize, m: usize) -> Option<usize> {
        if n + m > self.cutoff {
            return None;
        }
        let total = n + m;
        // states with fewer quanta, then position by n within the shell
        let offset = total * (total + 1) / 2 + n;
        Some(match electronic {
            Electronic::Plus => offset,
            Electronic::Minus => self.phonon_states() + offset,
        })
    }
}

/// Electronic label major, then `n + m` ascending, then `n` ascending.
pub fn build_basis(cutoff: usize) -> VibronicBasis {
    let mut states = Vec::with_capacity((cutoff + 1) * (cutoff + 2));
    for electronic in [Electronic::Plus, Electronic::Minus] {
        for total in 0..=cutoff {
            for n in 0..=total {
                states.push(VibronicState {
                    electronic,
                    n,
                    m: total - n,
                });
            }
        }
    }
    VibronicBasis { cutoff, states }
}

/// Matrix of the DJT Hamiltonian in `basis` (meV), including the
/// zero-point term.
pub fn build_hamiltonian(c: &JTCoupling, basis: &VibronicBasis) -> CMatrix {
    let dim = basis.len();
    let mut h = CMatrix::zeros(dim, dim);

    for (i, s) in basis.states().iter().enumerate() {
        h[(i, i)] = Complex64::from(c.homega * (s.n + s.m + 1) as f64);
    }

    for (col, s) in basis.states().iter().enumerate() {
        if s.electronic != Electronic::Minus {
            continue;
        }
        let (n, m) = (s.n, s.m);
        let nf = n as f64;
        let mf = m as f64;

        let mut targets: Vec<(usize, usize, f64)> = Vec::with_capacity(5);
        // F (a₊ + a₋†)
        if n > 0 {
            targets.push((n - 1, m, c.f * nf.sqrt()));
        }
        targets.push((n, m + 1, c.f * (mf + 1.0).sqrt()));
        // G (a₋² + 2 a₊† a₋ + a₊†²)
        if m > 1 {
            targets.push((n, m - 2, c.g * (mf * (mf - 1.0)).sqrt()));
        }
        if m > 0 {
            targets.push((n + 1, m - 1, 2.0 * c.g * ((nf + 1.0) * mf).sqrt()));
        }
        targets.push((n + 2, m, c.g * ((nf + 1.0) * (nf + 2.0)).sqrt()));

        for (tn, tm, amp) in targets {
            if let Some(row) = basis.index_of(Electronic::Plus, tn, tm) {
                h[(row, col)] += amp;
                h[(col, row)] += amp;
            }
        }
    }
    h
}

/// `⟨k|q^power|l⟩` for one Cartesian oscillator with `q = (a + a†)/√2`.
fn position_power(k: usize, l: usize, power: u32) -> f64 {
    let (k, l) = (k as f64, l as f64);
    match power {
        0 => (k == l) as u8 as f64,
        1 => {
            if k == l + 1.0 {
                (l + 1.0).sqrt() / 2f64.sqrt()
            } else if k + 1.0 == l {
                l.sqrt() / 2f64.sqrt()
            } else {
                0.0
            }
        }
        2 => {
            if k == l {
                (2.0 * l + 1.0) / 2.0
            } else if k == l + 2.0 {
                ((l + 1.0) * (l + 2.0)).sqrt() / 2.0
            } else if k + 2.0 == l {
                (l * (l - 1.0)).sqrt() / 2.0
            } else {
                0.0
            }
        }
        _ => unreachable!("only powers up to 2 appear"),
    }
}

/// The same Hamiltonian assembled in the Cartesian basis
/// `{θ, ε} ⊗ |n_x, n_y⟩`, `n_x + n_y ≤ cutoff`, directly from
/// `ħω(n_x+n_y+1) + F(xσz + yσx) + G[(x²−y²)σz − 2xyσx]`. It spans the same
/// truncated space as the circular basis, so both spectra coincide.
pub fn build_hamiltonian_cartesian(c: &JTCoupling, cutoff: usize) -> CMatrix {
    let mut phonons = Vec::new();
    for total in 0..=cutoff {
        for nx in 0..=total {
            phonons.push((nx, total - nx));
        }
    }
    let np = phonons.len();
    let mut h = CMatrix::zeros(2 * np, 2 * np);
    // electronic index 0 = θ, 1 = ε; σz = diag(1,−1), σx swaps
    for (a, &(kx, ky)) in phonons.iter().enumerate() {
        for (b, &(lx, ly)) in phonons.iter().enumerate() {
            let x = position_power(kx, lx, 1) * position_power(ky, ly, 0);
            let y = position_power(kx, lx, 0) * position_power(ky, ly, 1);
            let xx = position_power(kx, lx, 2) * position_power(ky, ly, 0);
            let yy = position_power(kx, lx, 0) * position_power(ky, ly, 2);
            let xy = position_power(kx, lx, 1) * position_power(ky, ly, 1);

            let z_coeff = c.f * x + c.g * (xx - yy);
            let x_coeff = c.f * y - 2.0 * c.g * xy;

            h[(a, b)] += z_coeff;
            h[(np + a, np + b)] -= z_coeff;
            h[(a, np + b)] += x_coeff;
            h[(np + a, b)] += x_coeff;
            if a == b {
                let diag = c.homega * (kx + ky + 1) as f64;
                h[(a, b)] += diag;
                h[(np + a, np + b)] += diag;
            }
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub n: usize,
    pub m: usize,
    pub amplitude: Complex64,
}

/// One member of the ground vibronic doublet,
/// `Ψ± = Σ c_nm |E±⟩|n,m⟩ + d_nm |E∓⟩|n,m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaronicState {
    /// `Plus` for Ψ+, `Minus` for Ψ−.
    pub label: Electronic,
    pub energy: f64,
    /// Components on the state's own electronic branch.
    pub c: Vec<Coefficient>,
    /// Components on the opposite branch.
    pub d: Vec<Coefficient>,
    /// Full coefficient vector in basis order.
    pub vector: Vec<Complex64>,
}

impl PolaronicState {
    fn from_vector(label: Electronic, energy: f64, basis: &VibronicBasis, vector: Vec<Complex64>) -> Self {
        let mut c = Vec::new();
        let mut d = Vec::new();
        for (s, &amplitude) in basis.states().iter().zip(&vector) {
            let coeff = Coefficient {
                n: s.n,
                m: s.m,
                amplitude,
            };
            if s.electronic == label {
                c.push(coeff);
            } else {
                d.push(coeff);
            }
        }
        PolaronicState {
            label,
            energy,
            c,
            d,
            vector,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.vector.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Components ordered by decreasing weight, `(branch, n, m, amplitude)`;
    /// ties keep basis order.
    pub fn largest_components(&self, count: usize) -> Vec<(Electronic, Coefficient)> {
        let mut all: Vec<(Electronic, Coefficient)> = self
            .c
            .iter()
            .map(|&k| (self.label, k))
            .chain(self.d.iter().map(|&k| (self.label.flipped(), k)))
            .collect();
        all.sort_by(|a, b| b.1.amplitude.norm_sqr().total_cmp(&a.1.amplitude.norm_sqr()));
        all.truncate(count);
        all
    }
}

/// `p = Σ|c_nm|² − Σ|d_nm|²`.
pub fn ham_factor(state: &PolaronicState) -> f64 {
    let c: f64 = state.c.iter().map(|k| k.amplitude.norm_sqr()).sum();
    let d: f64 = state.d.iter().map(|k| k.amplitude.norm_sqr()).sum();
    c - d
}

/// `⟨Ψ|(|E+⟩⟨E+| − |E−⟩⟨E−|)|Ψ⟩`, signed so that it equals `p` for Ψ+.
pub fn ham_factor_expectation(state: &PolaronicState, basis: &VibronicBasis) -> f64 {
    let tau: f64 = basis
        .states()
        .iter()
        .zip(&state.vector)
        .map(|(s, z)| s.electronic.sign() * z.norm_sqr())
        .sum();
    tau * state.label.sign()
}

#[derive(Debug, Clone)]
pub struct VibronicSolution {
    pub basis: VibronicBasis,
    pub homega: f64,
    /// Ascending, including the ħω zero-point energy.
    pub eigenvalues: Vec<f64>,
    /// `[Ψ+, Ψ−]`.
    pub ground_doublet: [PolaronicState; 2],
    pub p: f64,
    /// First level above the ground doublet minus the ground energy.
    pub tunneling_gap: f64,
}

impl VibronicSolution {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `|E₂ − E₁| / ħω`.
    pub fn doublet_splitting(&self) -> f64 {
        (self.eigenvalues[1] - self.eigenvalues[0]).abs() / self.homega
    }

    /// Eigenvalues measured from the uncoupled zero-point energy ħω.
    pub fn relative_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e - self.homega).collect()
    }
}

/// Make the largest-magnitude component real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm_sqr() > v[best].norm_sqr() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return;
    }
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

pub fn solve(c: &JTCoupling, cutoff: usize) -> Result<VibronicSolution> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("vibronic cutoff must be >= 1".into()));
    }
    let basis = build_basis(cutoff);
    let h = build_hamiltonian(c, &basis);
    let eig = eigh(&h)?;
    let dim = basis.len();

    // Within the (near-)degenerate ground pair the eigensolver returns an
    // arbitrary rotation. Diagonalize τ = |E+⟩⟨E+| − |E−⟩⟨E−| inside it to
    // fix Ψ± canonically.
    let pair = eig.vectors.columns(0, 2).into_owned();
    let mut tau = pair.clone();
    for (row, s) in basis.states().iter().enumerate() {
        if s.electronic == Electronic::Minus {
            for k in 0..2 {
                tau[(row, k)] = -tau[(row, k)];
            }
        }
    }
    let block = pair.adjoint() * tau;
    let inner = eigh(&block)?;
    let rotated = &pair * &inner.vectors;

    let energy_of = |v: &[Complex64]| -> f64 {
        let col = nalgebra::DVector::from_column_slice(v);
        (col.adjoint() * &h * &col)[(0, 0)].re
    };

    let make = |label: Electronic, k: usize| {
        let mut v: Vec<Complex64> = rotated.column(k).iter().copied().collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        fix_phase(&mut v);
        let energy = energy_of(&v);
        PolaronicState::from_vector(label, energy, &basis, v)
    };
    // inner eigenvalues ascend: column 1 carries the larger E+ weight
    let plus = make(Electronic::Plus, 1);
    let minus = make(Electronic::Minus, 0);

    let p = ham_factor(&plus).clamp(-1.0, 1.0);
    let tunneling_gap = if dim > 2 { eig.values[2] - eig.values[0] } else { 0.0 };

    Ok(VibronicSolution {
        homega: c.homega,
        eigenvalues: eig.values,
        ground_doublet: [plus, minus],
        p,
        tunneling_gap,
        basis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub cutoff: usize,
    pub p: f64,
    pub ground_energy: f64,
    /// `|p(N) − p(previous N)|`, absent for the first cutoff.
    pub p_change: Option<f64>,
}

pub fn convergence_study(c: &JTCoupling, cutoffs: &[usize]) -> Result<Vec<ConvergencePoint>> {
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("cutoffs must be strictly ascending".into()));
    }
    let mut out: Vec<ConvergencePoint> = Vec::with_capacity(cutoffs.len());
    for &cutoff in cutoffs {
        let sol = solve(c, cutoff)?;
        let p_change = out.last().map(|prev| (sol.p - prev.p).abs());
        out.push(ConvergencePoint {
            cutoff,
            p: sol.p,
            ground_energy: sol.ground_energy(),
            p_change,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apes::coupling_from_energies;
    use crate::eigen::hermiticity_defect;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_sizes() {
        assert_eq!(build_basis(0).len(), 2);
        assert_eq!(build_basis(4).len(), 30);
        for n in 0..8 {
            assert_eq!(build_basis(n).len(), (n + 1) * (n + 2));
        }
    }

    #[test]
    fn basis_order_cutoff_one() {
        let got: Vec<(Electronic, usize, usize)> = build_basis(1)
            .states()
            .iter()
            .map(|s| (s.electronic, s.n, s.m))
            .collect();
        use Electronic::*;
        assert_eq!(
            got,
            [
                (Plus, 0, 0),
                (Plus, 0, 1),
                (Plus, 1, 0),
                (Minus, 0, 0),
                (Minus, 0, 1),
                (Minus, 1, 0)
            ]
        );
    }

    #[test]
    fn index_of_agrees_with_order() {
        let b = build_basis(5);
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s.electronic, s.n, s.m), Some(i));
        }
        assert_eq!(b.index_of(Electronic::Plus, 3, 3), None);
    }

    #[test]
    fn decoupled_matrix_is_diagonal() {
        let c = JTCoupling::decoupled(40.0).unwrap();
        let b = build_basis(3);
        let h = build_hamiltonian(&c, &b);
        for i in 0..b.len() {
            for j in 0..b.len() {
                if i != j {
                    assert_eq!(h[(i, j)], Complex64::from(0.0));
                }
            }
            let s = b.states()[i];
            assert_eq!(h[(i, i)].re, 40.0 * (s.n + s.m + 1) as f64);
        }
    }

    #[test]
    fn cutoff_one_linear_by_hand() {
        // order: E+00, E+01, E+10, E-00, E-01, E-10
        // <E+ n' m'| F(a+ + a-†) |E- n m>:
        //   <E+ 0 1|E- 0 0> = F, <E+ 0 0|E- 1 0> = F
        let (f, w) = (7.0, 30.0);
        let c = JTCoupling::new(f, 0.0, w).unwrap();
        let h = build_hamiltonian(&c, &build_basis(1));
        #[rustfmt::skip]
        let want = [
            w,   0., 0.,  0., 0., f,
            0., 2.*w, 0., f,  0., 0.,
            0., 0., 2.*w, 0., 0., 0.,
            0., f,  0.,  w,  0., 0.,
            0., 0., 0.,  0., 2.*w, 0.,
            f,  0., 0.,  0., 0., 2.*w,
        ];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(h[(i, j)], Complex64::from(want[6 * i + j]), "({i},{j})");
            }
        }
    }

    #[test]
    fn hermitian_and_block_structured() {
        let c = JTCoupling::new(21.0, 9.5, 47.0).unwrap();
        for cutoff in 0..=6 {
            let b = build_basis(cutoff);
            let h = build_hamiltonian(&c, &b);
            assert!(hermiticity_defect(&h) <= 1e-12);
            for (i, si) in b.states().iter().enumerate() {
                for (j, sj) in b.states().iter().enumerate() {
                    if si.symmetry_class() != sj.symmetry_class() {
                        assert_eq!(h[(i, j)].norm(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn cartesian_and_circular_spectra_agree() {
        let c = JTCoupling::new(18.0, 7.0, 41.0).unwrap();
        for cutoff in 0..=3 {
            let circ = eigh(&build_hamiltonian(&c, &build_basis(cutoff))).unwrap();
            let cart = eigh(&build_hamiltonian_cartesian(&c, cutoff)).unwrap();
            assert_eq!(circ.values.len(), cart.values.len());
            for (a, b) in circ.values.iter().zip(&cart.values) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn decoupled_solution() {
        let c = JTCoupling::decoupled(55.0).unwrap();
        let sol = solve(&c, 4).unwrap();
        assert_eq!(sol.p, 1.0);
        assert_abs_diff_eq!(sol.ground_energy(), 55.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.tunneling_gap, 55.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.relative_eigenvalues()[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cutoff_zero_rejected() {
        let c = JTCoupling::decoupled(55.0).unwrap();
        assert!(matches!(solve(&c, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ham_factor_limits() {
        let one = Complex64::from(1.0);
        let half = Complex64::from(0.5f64.sqrt());
        let basis = build_basis(0);
        let pure = PolaronicState::from_vector(Electronic::Plus, 0.0, &basis, vec![one, 0.0.into()]);
        assert_eq!(ham_factor(&pure), 1.0);
        let even = PolaronicState::from_vector(Electronic::Plus, 0.0, &basis, vec![half, half]);
        assert_abs_diff_eq!(ham_factor(&even), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn table_rows_4h() {
        let sol = solve(&coupling_from_energies(9.4, 5.6, 60.19).unwrap(), 4).unwrap();
        assert!((sol.p - 0.63).abs() <= 0.05, "p = {}", sol.p);
        let sol = solve(&coupling_from_energies(11.4, 5.8, 49.43).unwrap(), 4).unwrap();
        assert!((sol.p - 0.55).abs() <= 0.05, "p = {}", sol.p);
    }

    #[test]
    fn doublet_properties() {
        let c = coupling_from_energies(9.3, 5.8, 47.19).unwrap();
        let sol = solve(&c, 4).unwrap();
        assert!(sol.doublet_splitting() < 1e-9);
        for state in &sol.ground_doublet {
            assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                ham_factor(state),
                ham_factor_expectation(state, &sol.basis),
                epsilon = 1e-12
            );
            let lead = state.largest_components(1)[0].1.amplitude;
            assert!(lead.im == 0.0 && lead.re > 0.0);
        }
        let [plus, minus] = &sol.ground_doublet;
        assert_abs_diff_eq!(ham_factor(plus), ham_factor(minus), epsilon = 1e-10);
        assert!((0.0..=1.0).contains(&sol.p));
    }

    #[test]
    fn convergence_rejects_unsorted() {
        let c = JTCoupling::decoupled(10.0).unwrap();
        assert!(convergence_study(&c, &[4, 2]).is_err());
        let pts = convergence_study(&c, &[1, 2, 3]).unwrap();
        assert!(pts.iter().all(|p| p.p == 1.0));
        assert_eq!(pts[0].p_change, None);
    }
}
