//! Minimal-depth intervals, inference rules with certificates, witnesses and
//! example generators.

mod examples;
mod interval;
mod rules;
mod witness;

pub use examples::{
    approaching_alphas, check_identity, conj_expand_family, constructible_triples,
    generate_max_example, perturbed_sum, probe_points, GenOptions, MaxCase, MaxExample,
    PerturbedSum,
};
pub use interval::{
    replay_certificate, Bounds, Certificate, DepthInterval, MnBound, Operator, RuleApplication,
    RuleStep,
};
pub use rules::{
    assumed_interval, interval_from_construction, rule_affine_max, rule_compact_support,
    rule_compose, rule_identity, rule_max, rule_perturb_sum, rule_scale, rule_sum,
};
pub use witness::{
    bump, coordinate_max, exact_witness, max_form_pair, unconditional_witnesses, witness_registry,
    zero_max_pair, Provenance, WitnessEntry, ZeroMaxPair,
};
