//! Fixtures shared by the criterion benches.

use tempobridge::testkit::{gen_formula_with, gen_structure_with, trial_rng, Alphabet, GenParams};
use tempobridge::{Formula, LogicId, StateFormula, Structure};

/// A generated structure with up to `states` states and a state formula of
/// the given depth over its alphabet. Deterministic in `seed`.
pub fn workload(logic: LogicId, states: usize, depth: usize, seed: u64) -> (Structure, StateFormula) {
    let params = GenParams { seed, max_states: states, max_actions: 3, max_props: 3, max_formula_depth: depth, trials: 1 };
    let mut rng = trial_rng(seed, 0);
    let structure = gen_structure_with(logic.carrier(), &params, &mut rng);
    let alphabet = Alphabet::of(&structure);
    match gen_formula_with(logic, &params, &alphabet, &mut rng) {
        Formula::State(phi) => (structure, phi),
        Formula::Upml(_) => panic!("workload needs a two-valued logic, got {logic}"),
    }
}

/// Generation picks the state count uniformly; benches want the upper end,
/// so this retries seeds until the structure has at least `min` states.
pub fn sized_workload(logic: LogicId, states: usize, depth: usize) -> (Structure, StateFormula) {
    (0..)
        .map(|seed| workload(logic, states, depth, seed))
        .find(|(st, _)| st.as_transition_system().num_states() * 4 >= states * 3)
        .expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sized_workloads_are_large() {
        let (st, _) = sized_workload(LogicId::Ctl, 40, 3);
        assert!(st.as_transition_system().num_states() >= 30);
    }
}
