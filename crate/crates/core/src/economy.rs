//! Daily workforce-proxy economic value.
//!
//! The economy on a given day is the population able to contribute,
//! scaled by the active restriction's impact factor:
//! `value = (s + e + r) * (1 - zeta)`. Infected and deceased persons are
//! out of the workforce regardless of restriction. The value is an
//! instantaneous daily level, not an accumulating integral.

use crate::scalar::Scalar;
use crate::seird::{Restriction, RestrictionEffects, SeirdState};

/// Economic output for one day, in persons and as a fraction of the
/// population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EconomyValue<T> {
    pub value: T,
    pub normalized: T,
}

/// Workforce value under an impact factor `zeta` in [0, 1).
pub fn economy_value<T: Scalar>(state: &SeirdState<T>, zeta: T, population: T) -> EconomyValue<T> {
    let value = (state.s + state.e + state.r) * (T::one() - zeta);
    EconomyValue {
        value,
        normalized: value / population,
    }
}

/// Workforce value under the active restriction's table entry.
pub fn economy_under<T: Scalar>(
    state: &SeirdState<T>,
    effects: &RestrictionEffects<T>,
    restriction: Restriction,
    population: T,
) -> EconomyValue<T> {
    economy_value(state, effects.zeta(restriction), population)
}
