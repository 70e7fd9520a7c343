//! Fidelity, Bures distance, trace distance and transition probability for
//! a few qubit states and a state on a direct sum M_2 ⊕ C.

use cstar_clone::algebra::AlgebraSpec;
use cstar_clone::matcore::vectors::basis_vector;
use cstar_clone::matcore::{Complex64, ComplexMatrix};
use cstar_clone::states::{metrics, mix, AlgebraState};

fn show(label: &str, a: &AlgebraState, b: &AlgebraState) -> cstar_clone::Result<()> {
    let m = metrics(a, b)?;
    let tp = m.transition_probability.map_or("n/a".to_string(), |t| format!("{t:.6}"));
    println!(
        "{label:<22} F = {:.6}  D = {:.6}  trace = {:.6}  transition = {tp}",
        m.fidelity, m.bures_distance, m.trace_distance
    );
    Ok(())
}

fn main() -> cstar_clone::Result<()> {
    let qubit = AlgebraSpec::full(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = AlgebraState::pure(qubit.clone(), 0, &basis_vector(2, 0))?;
    let one = AlgebraState::pure(qubit.clone(), 0, &basis_vector(2, 1))?;
    let plus = AlgebraState::pure(qubit.clone(), 0, &[Complex64::new(h, 0.0), Complex64::new(h, 0.0)])?;
    let mixed = AlgebraState::maximally_mixed(&qubit);

    show("|0>, |0>", &zero, &zero)?;
    show("|0>, |1>", &zero, &one)?;
    show("|0>, |+>", &zero, &plus)?;
    show("|0>, I/2", &zero, &mixed)?;
    show("|0>, 0.9|1> + 0.1|0>", &zero, &mix(&one, &zero, 0.1)?)?;

    // One weight on each summand of M_2 ⊕ C.
    let sum = AlgebraSpec::new(vec![2, 1])?;
    let a = AlgebraState::from_weighted_blocks(
        sum.clone(),
        vec![ComplexMatrix::from_real_diag(&[0.5, 0.0]), ComplexMatrix::from_real_diag(&[0.5])],
    )?;
    let b = AlgebraState::from_weighted_blocks(
        sum,
        vec![ComplexMatrix::from_real_diag(&[0.2, 0.0]), ComplexMatrix::from_real_diag(&[0.8])],
    )?;
    show("M_2 + C commuting", &a, &b)?;
    println!("(commuting states: F = sqrt(0.5*0.2) + sqrt(0.5*0.8) = {:.6})", (0.1f64).sqrt() + (0.4f64).sqrt());
    Ok(())
}
