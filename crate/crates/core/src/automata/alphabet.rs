use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type EventId = usize;

/// An event symbol together with its observability and fault attributes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Event {
    name: String,
    observable: bool,
    fault: bool,
}

impl Event {
    /// Fault events are always unobservable; asking for an observable fault is an error.
    pub fn new(name: impl Into<String>, observable: bool, fault: bool) -> Result<Self> {
        let name = name.into();
        if fault && observable {
            return Err(Error::AttributeConflict {
                event: name,
                left: "fault".into(),
                right: "observable".into(),
            });
        }
        Ok(Self {
            name,
            observable,
            fault,
        })
    }

    pub fn observable(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            observable: true,
            fault: false,
        }
    }

    pub fn unobservable(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            observable: false,
            fault: false,
        }
    }

    pub fn fault(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            observable: false,
            fault: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_observable(&self) -> bool {
        self.observable
    }

    pub fn is_fault(&self) -> bool {
        self.fault
    }

    pub(crate) fn same_attributes(&self, other: &Event) -> bool {
        self.observable == other.observable && self.fault == other.fault
    }

    pub(crate) fn attribute_string(&self) -> String {
        match (self.observable, self.fault) {
            (true, _) => "o".into(),
            (false, true) => "u f".into(),
            (false, false) => "u".into(),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Ordered event set. Iteration follows declaration order, and every
/// construction downstream relies on that order for determinism.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    events: Vec<Event>,
    index: HashMap<String, EventId>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut alphabet = Alphabet::default();
        for event in events {
            if event.name.is_empty() || event.name.chars().any(char::is_whitespace) {
                return Err(Error::UnknownEvent(event.name));
            }
            if let Some(&id) = alphabet.index.get(&event.name) {
                let existing = &alphabet.events[id];
                if existing.same_attributes(&event) {
                    continue;
                }
                return Err(Error::AttributeConflict {
                    event: event.name.clone(),
                    left: existing.attribute_string(),
                    right: event.attribute_string(),
                });
            }
            alphabet.push(event);
        }
        Ok(alphabet)
    }

    fn push(&mut self, event: Event) -> EventId {
        let id = self.events.len();
        self.index.insert(event.name.clone(), id);
        self.events.push(event);
        id
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter()
    }

    pub fn ids(&self) -> std::ops::Range<EventId> {
        0..self.events.len()
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id].name
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<&Event> {
        self.id(name).map(|id| &self.events[id])
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.events.iter().map(|e| e.name.clone()).collect()
    }

    pub fn observable_names(&self) -> BTreeSet<String> {
        self.events
            .iter()
            .filter(|e| e.observable)
            .map(|e| e.name.clone())
            .collect()
    }

    pub fn fault_names(&self) -> BTreeSet<String> {
        self.events
            .iter()
            .filter(|e| e.fault)
            .map(|e| e.name.clone())
            .collect()
    }

    pub fn has_faults(&self) -> bool {
        self.events.iter().any(|e| e.fault)
    }

    /// Union keeping `self`'s order, then the new events of `other` in their order.
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        Alphabet::new(self.events.iter().chain(other.events.iter()).cloned())
    }

    /// Names shared with `other`, erroring if a shared name disagrees on attributes.
    pub fn common(&self, other: &Alphabet) -> Result<BTreeSet<String>> {
        let mut shared = BTreeSet::new();
        for event in &self.events {
            if let Some(theirs) = other.get(&event.name) {
                if !event.same_attributes(theirs) {
                    return Err(Error::AttributeConflict {
                        event: event.name.clone(),
                        left: event.attribute_string(),
                        right: theirs.attribute_string(),
                    });
                }
                shared.insert(event.name.clone());
            }
        }
        Ok(shared)
    }

    /// Sub-alphabet of the named events, in this alphabet's order.
    pub fn restrict(&self, names: &BTreeSet<String>) -> Result<Alphabet> {
        if let Some(unknown) = names.iter().find(|n| !self.contains(n)) {
            return Err(Error::UnknownEvent(unknown.clone()));
        }
        Alphabet::new(
            self.events
                .iter()
                .filter(|e| names.contains(&e.name))
                .cloned(),
        )
    }

    /// Membership vector indexed by event id.
    pub(crate) fn mask(&self, names: &BTreeSet<String>) -> Vec<bool> {
        self.events.iter().map(|e| names.contains(&e.name)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_must_be_unobservable() {
        assert!(Event::new("f", true, true).is_err());
        assert!(Event::new("f", false, true).is_ok());
    }

    #[test]
    fn union_keeps_declaration_order() {
        let a = Alphabet::new([Event::observable("c"), Event::unobservable("a")]).unwrap();
        let b = Alphabet::new([Event::unobservable("b"), Event::observable("c")]).unwrap();
        let u = a.union(&b).unwrap();
        let names: Vec<_> = u.iter().map(|e| e.name().to_string()).collect();
        assert_eq!(names, ["c", "a", "b"]);
    }

    #[test]
    fn conflicting_attributes_are_rejected() {
        let a = Alphabet::new([Event::observable("c")]).unwrap();
        let b = Alphabet::new([Event::unobservable("c")]).unwrap();
        assert!(matches!(a.union(&b), Err(Error::AttributeConflict { .. })));
        assert!(a.common(&b).is_err());
    }

    #[test]
    fn restrict_rejects_unknown_names() {
        let a = Alphabet::new([Event::observable("c")]).unwrap();
        let names = BTreeSet::from(["x".to_string()]);
        assert!(matches!(a.restrict(&names), Err(Error::UnknownEvent(n)) if n == "x"));
    }
}
