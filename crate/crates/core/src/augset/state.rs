//! Per-layer element types for the refine state machine.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::DistanceLayers;
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    D1,
    D2,
    D3,
}

impl Layer {
    pub fn odd(k: usize) -> Layer {
        match k {
            0 => Layer::D1,
            1 => Layer::D3,
            _ => panic!("odd layer index 2k+1 only exists for k in {{0, 1}}"),
        }
    }

    fn slot(self) -> u8 {
        match self {
            Layer::D1 => 1,
            Layer::D2 => 2,
            Layer::D3 => 3,
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.slot())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementType {
    Fresh,
    Selected,
    Removed,
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementType::Fresh => "fresh",
            ElementType::Selected => "selected",
            ElementType::Removed => "removed",
        })
    }
}

/// One type change, as written to the debug trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub element: ElementId,
    pub layer: Layer,
    pub from: ElementType,
    pub to: ElementType,
    pub operation: String,
    pub queries: u64,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}:{}->{} {} q={}",
            self.element, self.layer, self.from, self.to, self.operation, self.queries
        )
    }
}

/// Reads the current query count for trace snapshots.
pub type QueryClock = Arc<dyn Fn() -> u64 + Send + Sync>;

#[derive(Clone)]
struct TraceLog {
    clock: QueryClock,
    events: Vec<Transition>,
}

/// Fresh / selected / removed bookkeeping over the layers `D1, D2, D3`.
///
/// The selected parts are `B1 ⊆ D1`, `A1 ⊆ D2`, `B2 ⊆ D3`. The imaginary
/// layers `D0` and `D4` (and `A0`, `A2`) are always empty. Types only move
/// fresh -> selected -> removed or fresh -> removed; every move goes through
/// [`LayerState::transition`], which rejects anything else.
#[derive(Clone)]
pub struct LayerState {
    layers: DistanceLayers,
    slot: Vec<u8>,
    status: Vec<ElementType>,
    b1: ElementSet,
    a1: ElementSet,
    b2: ElementSet,
    trace: Option<TraceLog>,
}

impl fmt::Debug for LayerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())
    }
}

impl LayerState {
    /// Every layer element starts fresh.
    pub fn new(layers: DistanceLayers) -> Self {
        let size = [&layers.d1, &layers.d2, &layers.d3]
            .iter()
            .filter_map(|d| d.max())
            .map(|e| e.index() + 1)
            .max()
            .unwrap_or(0);
        let mut slot = vec![0u8; size];
        for (layer, set) in [(Layer::D1, &layers.d1), (Layer::D2, &layers.d2), (Layer::D3, &layers.d3)] {
            for e in set {
                slot[e.index()] = layer.slot();
            }
        }
        Self {
            layers,
            slot,
            status: vec![ElementType::Fresh; size],
            b1: ElementSet::new(),
            a1: ElementSet::new(),
            b2: ElementSet::new(),
            trace: None,
        }
    }

    /// Starts recording transitions, stamping each with `clock()`.
    pub fn enable_trace(&mut self, clock: QueryClock) {
        self.trace = Some(TraceLog {
            clock,
            events: Vec::new(),
        });
    }

    /// Number of transitions recorded so far.
    pub fn trace_len(&self) -> usize {
        self.trace.as_ref().map_or(0, |t| t.events.len())
    }

    pub fn take_trace(&mut self) -> Vec<Transition> {
        self.trace.as_mut().map(|t| std::mem::take(&mut t.events)).unwrap_or_default()
    }

    pub fn layers(&self) -> &DistanceLayers {
        &self.layers
    }

    pub fn layer(&self, layer: Layer) -> &ElementSet {
        match layer {
            Layer::D1 => &self.layers.d1,
            Layer::D2 => &self.layers.d2,
            Layer::D3 => &self.layers.d3,
        }
    }

    pub fn layer_of(&self, x: ElementId) -> Option<Layer> {
        match self.slot.get(x.index()) {
            Some(1) => Some(Layer::D1),
            Some(2) => Some(Layer::D2),
            Some(3) => Some(Layer::D3),
            _ => None,
        }
    }

    pub fn type_of(&self, x: ElementId) -> Option<ElementType> {
        self.layer_of(x).map(|_| self.status[x.index()])
    }

    fn with_type(&self, layer: Layer, t: ElementType) -> ElementSet {
        ElementSet::from_sorted_unchecked(self.layer(layer).iter().filter(|e| self.status[e.index()] == t).collect())
    }

    pub fn fresh(&self, layer: Layer) -> ElementSet {
        self.with_type(layer, ElementType::Fresh)
    }

    pub fn removed(&self, layer: Layer) -> ElementSet {
        self.with_type(layer, ElementType::Removed)
    }

    pub fn selected(&self, layer: Layer) -> &ElementSet {
        match layer {
            Layer::D1 => &self.b1,
            Layer::D2 => &self.a1,
            Layer::D3 => &self.b2,
        }
    }

    pub fn b1(&self) -> &ElementSet {
        &self.b1
    }

    pub fn a1(&self) -> &ElementSet {
        &self.a1
    }

    pub fn b2(&self) -> &ElementSet {
        &self.b2
    }

    /// `|B1| - |B2|` (saturating; `|B1| >= |B2|` holds for a partial augmenting set).
    pub fn gap(&self) -> usize {
        self.b1.len().saturating_sub(self.b2.len())
    }

    /// Moves `x` from `from` to `to`, rejecting backward or mismatched moves.
    pub fn transition(&mut self, x: ElementId, layer: Layer, from: ElementType, to: ElementType, operation: &str) -> Result<()> {
        let allowed = matches!(
            (from, to),
            (ElementType::Fresh, ElementType::Selected)
                | (ElementType::Fresh, ElementType::Removed)
                | (ElementType::Selected, ElementType::Removed)
        );
        if !allowed {
            return Err(Error::StateCorruption(format!("{x}: illegal move {from} -> {to} in {operation}")));
        }
        if self.layer_of(x) != Some(layer) {
            return Err(Error::StateCorruption(format!("{x} is not in layer {layer} ({operation})")));
        }
        let current = self.status[x.index()];
        if current != from {
            return Err(Error::StateCorruption(format!(
                "{x} in {layer} is {current}, expected {from} ({operation})"
            )));
        }
        self.status[x.index()] = to;
        let selected = match layer {
            Layer::D1 => &mut self.b1,
            Layer::D2 => &mut self.a1,
            Layer::D3 => &mut self.b2,
        };
        if to == ElementType::Selected {
            selected.insert(x);
        } else if from == ElementType::Selected {
            selected.remove(x);
        }
        if let Some(trace) = &mut self.trace {
            let queries = (trace.clock)();
            trace.events.push(Transition {
                element: x,
                layer,
                from,
                to,
                operation: operation.to_string(),
                queries,
            });
        }
        Ok(())
    }

    pub fn transition_all(
        &mut self,
        xs: impl IntoIterator<Item = ElementId>,
        layer: Layer,
        from: ElementType,
        to: ElementType,
        operation: &str,
    ) -> Result<()> {
        for x in xs {
            self.transition(x, layer, from, to, operation)?;
        }
        Ok(())
    }

    pub fn partial(&self) -> PartialAugmentingSet {
        PartialAugmentingSet {
            b1: self.b1.clone(),
            a1: self.a1.clone(),
            b2: self.b2.clone(),
        }
    }

    /// One line: every fresh/selected/removed part.
    pub fn summary(&self) -> String {
        format!(
            "F1={} F2={} F3={} B1={} A1={} B2={} R1={} R2={} R3={}",
            self.fresh(Layer::D1),
            self.fresh(Layer::D2),
            self.fresh(Layer::D3),
            self.b1,
            self.a1,
            self.b2,
            self.removed(Layer::D1),
            self.removed(Layer::D2),
            self.removed(Layer::D3)
        )
    }
}

pub fn init_layer_state(layers: DistanceLayers) -> LayerState {
    LayerState::new(layers)
}

/// `(B1, A1, B2)` satisfying (a), (c), (e), (f), `|B1| >= |A1| >= |B2|` and
/// `rank2(S + B1 - A1) = rank2(S)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAugmentingSet {
    pub b1: ElementSet,
    pub a1: ElementSet,
    pub b2: ElementSet,
}

impl PartialAugmentingSet {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.b1.len(), self.a1.len(), self.b2.len())
    }
}

/// `(B1, A1, B2)` of common width `w`; `S ⊕ Π = S + B1 - A1 + B2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingSet {
    pub b1: ElementSet,
    pub a1: ElementSet,
    pub b2: ElementSet,
}

impl AugmentingSet {
    pub fn new(b1: ElementSet, a1: ElementSet, b2: ElementSet) -> Self {
        Self { b1, a1, b2 }
    }

    /// The common size, or `None` when the three parts differ in size.
    pub fn width(&self) -> Option<usize> {
        let w = self.b2.len();
        (self.b1.len() == w && self.a1.len() == w).then_some(w)
    }
}

impl fmt::Display for AugmentingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.b1, self.a1, self.b2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3_layers() -> DistanceLayers {
        DistanceLayers {
            d1: ElementSet::from([2]),
            d2: ElementSet::from([1]),
            d3: ElementSet::from([0]),
        }
    }

    #[test]
    fn init_is_all_fresh() {
        let st = init_layer_state(path3_layers());
        assert_eq!(st.fresh(Layer::D1), ElementSet::from([2]));
        assert_eq!(st.fresh(Layer::D2), ElementSet::from([1]));
        assert_eq!(st.fresh(Layer::D3), ElementSet::from([0]));
        assert!(st.b1().is_empty() && st.a1().is_empty() && st.b2().is_empty());
        assert!(st.removed(Layer::D1).is_empty());
    }

    #[test]
    fn empty_layers_give_empty_state() {
        let st = init_layer_state(DistanceLayers::default());
        assert_eq!(st.summary(), "F1={} F2={} F3={} B1={} A1={} B2={} R1={} R2={} R3={}");
    }

    #[test]
    fn guard_rejects_backward_moves() {
        let mut st = init_layer_state(path3_layers());
        let x = ElementId(2);
        st.transition(x, Layer::D1, ElementType::Fresh, ElementType::Selected, "t").unwrap();
        assert_eq!(st.b1(), &ElementSet::from([2]));
        assert!(st
            .transition(x, Layer::D1, ElementType::Selected, ElementType::Fresh, "t")
            .is_err());
        st.transition(x, Layer::D1, ElementType::Selected, ElementType::Removed, "t").unwrap();
        assert!(st.b1().is_empty());
        assert!(st
            .transition(x, Layer::D1, ElementType::Removed, ElementType::Selected, "t")
            .is_err());
        // wrong layer, wrong source type
        assert!(st
            .transition(ElementId(0), Layer::D1, ElementType::Fresh, ElementType::Selected, "t")
            .is_err());
        assert!(st
            .transition(ElementId(0), Layer::D3, ElementType::Selected, ElementType::Removed, "t")
            .is_err());
    }

    #[test]
    fn width_requires_equal_parts() {
        let pi = AugmentingSet::new(ElementSet::from([3]), ElementSet::new(), ElementSet::new());
        assert_eq!(pi.width(), None);
        assert_eq!(AugmentingSet::default().width(), Some(0));
    }
}
