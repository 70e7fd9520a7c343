//! Walks the impossibility chain on synthetic candidates that claim to clone
//! two close states, and on the classical copier where every step holds.

use cstar_clone::algebra::{AlgebraSpec, CommutingPair};
use cstar_clone::cloning::{
    classical_copy_channel, synthetic_candidates, trace_theorem, CloneCandidate, CloneTolerances,
};
use cstar_clone::matcore::Complex64;
use cstar_clone::states::AlgebraState;

fn main() -> cstar_clone::Result<()> {
    let tol = CloneTolerances::default();
    let eps = 0.05;
    let pair = CommutingPair::new(AlgebraSpec::full(2));
    let blank = AlgebraState::maximally_mixed(pair.factor());
    for c in synthetic_candidates(&pair, eps, 3, 1)? {
        let t = trace_theorem(&pair, &c.psi, &c.phi, &c.candidate, eps, &blank, &tol)?;
        println!("synthetic F(psi, phi) = {:.4}, verdict {:?}", t.input_fidelity, t.verdict);
        for s in &t.steps {
            println!("    {:<20} {:>10.6} {:<2} {:<10.6} {:?}", s.name, s.lhs, s.relation, s.rhs, s.status);
        }
    }

    let spec = AlgebraSpec::diagonal(2);
    let pair = CommutingPair::new(spec.clone());
    let one = [Complex64::new(1.0, 0.0)];
    let psi = AlgebraState::pure(spec.clone(), 0, &one)?;
    let phi = AlgebraState::pure(spec.clone(), 1, &one)?;
    let copier = CloneCandidate::Channel(classical_copy_channel(&spec)?);
    let t = trace_theorem(&pair, &psi, &phi, &copier, eps, &AlgebraState::maximally_mixed(&spec), &tol)?;
    println!("classical copier: verdict {:?}, first violation {:?}", t.verdict, t.first_violation);
    Ok(())
}
