//! Fixed-capacity experience replay with uniform sampling.

use rand::Rng;

use crate::env::Observation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seird::Restriction;

/// One environment step as stored for replay.
#[derive(Clone, Debug)]
pub struct Transition<T> {
    pub observation: Observation<T>,
    pub action: Restriction,
    pub reward: T,
    pub next_observation: Observation<T>,
    pub done: bool,
}

/// Ring buffer over transitions: once full, each push evicts the oldest
/// entry.
#[derive(Clone, Debug)]
pub struct ReplayBuffer<T> {
    items: Vec<Transition<T>>,
    capacity: usize,
    next: usize,
}

impl<T: Scalar> ReplayBuffer<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        ReplayBuffer {
            items: Vec::new(),
            capacity,
            next: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, transition: Transition<T>) {
        if self.items.len() < self.capacity {
            self.items.push(transition);
        } else {
            self.items[self.next] = transition;
            self.next = (self.next + 1) % self.capacity;
        }
    }

    /// Draws `count` distinct transitions uniformly.
    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> Result<Vec<&Transition<T>>> {
        if count > self.items.len() {
            return Err(Error::BufferTooSmall {
                len: self.items.len(),
                needed: count,
            });
        }
        let picked = rand::seq::index::sample(rng, self.items.len(), count);
        Ok(picked.iter().map(|i| &self.items[i]).collect())
    }
}
