//! The classical copier clones every pure state of an abelian algebra, and
//! the same audit rejects the identity and swap channels on a qubit.

use cstar_clone::algebra::AlgebraSpec;
use cstar_clone::channels::{identity, swap};
use cstar_clone::cloning::{audit_cloner, classical_copy_channel, CloneSpec};
use cstar_clone::matcore::vectors::basis_vector;
use cstar_clone::states::AlgebraState;

fn main() -> cstar_clone::Result<()> {
    for d in 2..=4 {
        let spec = AlgebraSpec::diagonal(d);
        let blank = AlgebraState::maximally_mixed(&spec);
        let report = audit_cloner(&classical_copy_channel(&spec)?, &CloneSpec::new(spec, blank, 0.0, 0, 1)?)?;
        println!(
            "classical d={d}: perfect {}  min clone fidelity {:.3}  samples {}",
            report.verdict_perfect, report.aggregates.min_clone_fidelity, report.aggregates.samples
        );
    }

    let qubit = AlgebraSpec::full(2);
    let blank = AlgebraState::pure(qubit.clone(), 0, &basis_vector(2, 0))?;
    let spec = CloneSpec::new(qubit, blank, 0.1, 8, 1)?;
    for (name, c) in [("identity", identity(4)), ("swap", swap(2))] {
        let r = audit_cloner(&c, &spec)?;
        println!(
            "{name:<8}: perfect {}  0.1-imperfect {}  min clone {:.4}  min original {:.4}",
            r.verdict_perfect, r.verdict_epsilon, r.aggregates.min_clone_fidelity, r.aggregates.min_original_fidelity
        );
    }
    Ok(())
}
