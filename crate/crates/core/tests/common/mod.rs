//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use djt_core::catalog::DefectParams;
use djt_core::pseudospin::{KramersDoublet, Spin};
use djt_core::vibronic::{Electronic, VibronicBasis};
use djt_core::JTCoupling;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Single-mode annihilation operator on `dim` Fock states.
fn annihilation(dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// DJT Hamiltonian built from explicit two-mode operator products in an
/// oversized Fock space, then projected onto `basis`.
pub fn hand_hamiltonian(c: &JTCoupling, basis: &VibronicBasis) -> DMatrix<Complex64> {
    let fock = basis.cutoff() + 4;
    let a = annihilation(fock);
    let id = DMatrix::<f64>::identity(fock, fock);
    let a_plus = a.kronecker(&id);
    let a_minus = id.kronecker(&a);
    let ap_dag = a_plus.transpose();
    let am_dag = a_minus.transpose();

    // ⟨E+|H|E−⟩ as an operator on the phonons
    let coupling =
        (&a_plus + &am_dag) * c.f + (&a_minus * &a_minus + (&ap_dag * &a_minus) * 2.0 + &ap_dag * &ap_dag) * c.g;
    let number = &ap_dag * &a_plus + &am_dag * &a_minus;

    let flat = |n: usize, m: usize| n * fock + m;
    let dim = basis.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (i, si) in basis.states().iter().enumerate() {
        for (j, sj) in basis.states().iter().enumerate() {
            let (bra, ket) = (flat(si.n, si.m), flat(sj.n, sj.m));
            let value = match (si.electronic, sj.electronic) {
                (Electronic::Plus, Electronic::Minus) => coupling[(bra, ket)],
                (Electronic::Minus, Electronic::Plus) => coupling[(ket, bra)],
                _ => c.homega * (number[(bra, ket)] + if bra == ket { 1.0 } else { 0.0 }),
            };
            h[(i, j)] = Complex64::from(value);
        }
    }
    h
}

/// Zero-field levels (GHz, ascending) of `A∥ S_z I_z + A⊥ (S_x I_x + S_y I_y)`
/// for S = 1/2, written out element by element in the `|m_s, m_I⟩` basis.
pub fn brute_hyperfine_levels(nuclear_spin: f64, a_par_mhz: f64, a_perp_mhz: f64) -> Vec<f64> {
    let ni = (2.0 * nuclear_spin).round() as usize + 1;
    let m_i = |k: usize| nuclear_spin - k as f64;
    let dim = 2 * ni;
    let idx = |up: bool, k: usize| if up { k } else { ni + k };
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..ni {
        h[(idx(true, k), idx(true, k))] = 0.5 * a_par_mhz * m_i(k);
        h[(idx(false, k), idx(false, k))] = -0.5 * a_par_mhz * m_i(k);
    }
    // ⟨+1/2, m_I| S+ I− |−1/2, m_I + 1⟩
    for k in 1..ni {
        let m = m_i(k);
        let elem = 0.5 * a_perp_mhz * (nuclear_spin * (nuclear_spin + 1.0) - m * (m + 1.0)).sqrt();
        h[(idx(true, k), idx(false, k - 1))] = elem;
        h[(idx(false, k - 1), idx(true, k))] = elem;
    }
    let mut levels: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().map(|e| e / 1000.0).collect();
    levels.sort_by(f64::total_cmp);
    levels
}

fn d_index(m_l: i32, spin: Spin) -> usize {
    ((m_l + 2) * 2) as usize + if spin == Spin::Up { 0 } else { 1 }
}

fn as_vector(kd: &KramersDoublet) -> Vec<Complex64> {
    let mut v = vec![Complex64::from(0.0); 10];
    for c in &kd.composition {
        v[d_index(c.m_l, c.spin)] = c.amplitude;
    }
    v
}

/// `|⟨kd| −(k(L+ + L−) + g0(S+ + S−)) |partner⟩|` from explicit 10×10
/// matrices on `|l=2, m_l⟩ ⊗ |s=1/2, m_s⟩`.
pub fn brute_g_perp(kd: &KramersDoublet, partner: &KramersDoublet, g0: f64, k: f64) -> f64 {
    let mut op = DMatrix::<f64>::zeros(10, 10);
    for m in -2..2 {
        let elem = ((6 - m * (m + 1)) as f64).sqrt();
        for spin in [Spin::Up, Spin::Down] {
            op[(d_index(m + 1, spin), d_index(m, spin))] += k * elem;
            op[(d_index(m, spin), d_index(m + 1, spin))] += k * elem;
        }
    }
    for m in -2..=2 {
        op[(d_index(m, Spin::Up), d_index(m, Spin::Down))] += g0;
        op[(d_index(m, Spin::Down), d_index(m, Spin::Up))] += g0;
    }
    let bra = as_vector(kd);
    let ket = as_vector(partner);
    let mut total = Complex64::from(0.0);
    for i in 0..10 {
        for j in 0..10 {
            total -= bra[i].conj() * op[(i, j)] * ket[j];
        }
    }
    total.norm()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Published ΔE_SOC^red over ΔE_SOC, the p implied by a catalog row.
pub fn implied_p(d: &DefectParams) -> Option<f64> {
    d.reference.de_soc_red.map(|red| red / d.de_soc)
}
