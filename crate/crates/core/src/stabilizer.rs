//! Per-hand running average over the most recent in-workspace intersections.
//!
//! Samples outside the workspace are dropped on arrival: they neither enter
//! the buffer nor evict anything. Every accepted sample produces an output,
//! including while the buffer is still filling.

use std::collections::VecDeque;

use crate::geometry::{PlanarPoint, WorkspaceBounds};
use crate::stream::Hand;

pub const WINDOW: usize = 5;

/// A stabilized pointed location in workplane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GesturePoint {
    pub position: PlanarPoint,
    pub timestamp: f64,
    pub hand: Hand,
    pub window_size: usize,
}

#[derive(Debug, Clone)]
pub struct Stabilizer {
    bounds: WorkspaceBounds,
    window: usize,
    left: VecDeque<PlanarPoint>,
    right: VecDeque<PlanarPoint>,
}

impl Stabilizer {
    pub fn new(bounds: WorkspaceBounds) -> Self {
        Self::with_window(bounds, WINDOW)
    }

    /// # Panics
    /// If `window` is zero.
    pub fn with_window(bounds: WorkspaceBounds, window: usize) -> Self {
        assert!(window >= 1, "stabilizer window must hold at least one sample");
        Self {
            bounds,
            window,
            left: VecDeque::with_capacity(window),
            right: VecDeque::with_capacity(window),
        }
    }

    pub fn bounds(&self) -> &WorkspaceBounds {
        &self.bounds
    }

    fn buffer_mut(&mut self, hand: Hand) -> &mut VecDeque<PlanarPoint> {
        match hand {
            Hand::Left => &mut self.left,
            Hand::Right => &mut self.right,
        }
    }

    pub fn buffered(&self, hand: Hand) -> usize {
        match hand {
            Hand::Left => self.left.len(),
            Hand::Right => self.right.len(),
        }
    }

    pub fn push(&mut self, raw: PlanarPoint, timestamp: f64, hand: Hand) -> Option<GesturePoint> {
        if !raw.is_finite() || !self.bounds.contains(&raw) {
            return None;
        }
        let window = self.window;
        let buf = self.buffer_mut(hand);
        if buf.len() == window {
            buf.pop_front();
        }
        buf.push_back(raw);
        let position = PlanarPoint::mean(buf.make_contiguous())?;
        Some(GesturePoint {
            position,
            timestamp,
            hand,
            window_size: buf.len(),
        })
    }

    pub fn reset(&mut self, hand: Hand) {
        self.buffer_mut(hand).clear();
    }

    pub fn reset_all(&mut self) {
        self.left.clear();
        self.right.clear();
    }
}
