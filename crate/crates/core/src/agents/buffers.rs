use crate::game::{ActionId, InfoStateKey};
use rand::Rng;
use std::collections::VecDeque;

/// Which policy an agent follows for the current episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    BestResponse,
    Average,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::BestResponse => "best_response",
            Mode::Average => "average",
        }
    }
}

/// The agent's next decision point, or nothing if the episode ended.
#[derive(Debug, Clone, PartialEq)]
pub struct NextState {
    pub key: InfoStateKey,
    pub legal: Vec<ActionId>,
}

/// One step of experience from a single agent's point of view.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub key: InfoStateKey,
    pub legal: Vec<ActionId>,
    pub action: ActionId,
    /// Zero except on the final transition, which carries the payoff.
    pub reward: f64,
    /// `None` when the episode terminated after this action.
    pub next: Option<NextState>,
    pub episode: u64,
    /// Undiscounted return from this step to the end of the episode.
    pub ret: f64,
    pub mode: Mode,
}

impl Transition {
    pub fn is_terminal(&self) -> bool {
        self.next.is_none()
    }

    pub fn action_index(&self) -> usize {
        self.legal.binary_search(&self.action).expect("transition action is legal")
    }
}

/// Fixed-capacity FIFO replay memory.
#[derive(Debug, Clone)]
pub struct RlBuffer {
    capacity: usize,
    items: VecDeque<Transition>,
}

impl RlBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        RlBuffer { capacity, items: VecDeque::with_capacity(capacity.min(1 << 16)) }
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

    /// Append, evicting and returning the oldest item when full.
    pub fn push(&mut self, t: Transition) -> Option<Transition> {
        let evicted = if self.items.len() == self.capacity { self.items.pop_front() } else { None };
        self.items.push_back(t);
        evicted
    }

    pub fn get(&self, i: usize) -> Option<&Transition> {
        self.items.get(i)
    }

    /// Oldest first.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Transition> {
        self.items.iter()
    }

    /// `n` items drawn uniformly with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<&Transition> {
        (0..n).map(|_| &self.items[rng.random_range(0..self.items.len())]).collect()
    }
}

/// `(key, action, legal-action bitmask)` as stored in the supervised memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlItem {
    pub key: InfoStateKey,
    pub action: ActionId,
    pub legal_mask: u32,
}

pub fn legal_mask(legal: &[ActionId]) -> u32 {
    legal.iter().fold(0, |m, &a| m | (1 << a))
}

/// Reservoir sample of everything ever inserted.
#[derive(Debug, Clone)]
pub struct SlBuffer {
    capacity: usize,
    seen: u64,
    items: Vec<SlItem>,
}

/// What a reservoir insertion did to the stored sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    Appended,
    Replaced(SlItem),
    Discarded,
}

impl SlBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        SlBuffer { capacity, seen: 0, items: Vec::new() }
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

    /// Number of items offered so far.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn items(&self) -> &[SlItem] {
        &self.items
    }

    /// Below capacity the item is appended. Otherwise, with N items seen
    /// including this one, it replaces a uniform slot with probability
    /// capacity / N.
    pub fn insert<R: Rng + ?Sized>(&mut self, item: SlItem, rng: &mut R) -> Insert {
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push(item);
            return Insert::Appended;
        }
        let j = rng.random_range(0..self.seen);
        if (j as usize) < self.capacity {
            Insert::Replaced(std::mem::replace(&mut self.items[j as usize], item))
        } else {
            Insert::Discarded
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<&SlItem> {
        (0..n).map(|_| &self.items[rng.random_range(0..self.items.len())]).collect()
    }
}
