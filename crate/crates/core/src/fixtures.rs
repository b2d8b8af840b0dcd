//! The two-module worked example: `g1` carries the fault `f`, `g2` is
//! fault-free and shares `b` and `c` with it. Observable events are `c`, `e`.

use crate::automata::{Automaton, AutomatonBuilder, Event, ModularSystem, Module};

pub const G1_FSM: &str = "name: g1
events:
  c o
  a u
  f u f
  b u
states:
  0 init
  1
  2
  3
trans:
  0 c 0
  0 a 1
  0 f 2
  1 c 1
  2 b 3
  3 c 3
";

pub const G2_FSM: &str = "name: g2
events:
  c o
  b u
  e o
states:
  0 init
  1
  2
trans:
  0 c 0
  0 b 1
  1 e 2
  2 c 2
";

pub fn g1_builder() -> AutomatonBuilder {
    Automaton::builder("g1")
        .events([
            Event::observable("c"),
            Event::unobservable("a"),
            Event::fault("f"),
            Event::unobservable("b"),
        ])
        .states(["0", "1", "2", "3"])
        .initial("0")
        .transition("0", "c", "0")
        .transition("0", "a", "1")
        .transition("0", "f", "2")
        .transition("1", "c", "1")
        .transition("2", "b", "3")
        .transition("3", "c", "3")
}

pub fn g1() -> Automaton {
    g1_builder().build().expect("g1 is well formed")
}

pub fn g2() -> Automaton {
    Automaton::builder("g2")
        .events([
            Event::observable("c"),
            Event::unobservable("b"),
            Event::observable("e"),
        ])
        .states(["0", "1", "2"])
        .initial("0")
        .transition("0", "c", "0")
        .transition("0", "b", "1")
        .transition("1", "e", "2")
        .transition("2", "c", "2")
        .build()
        .expect("g2 is well formed")
}

pub fn example_system() -> ModularSystem {
    ModularSystem::new(vec![Module::from_automaton(g1()), Module::from_automaton(g2())])
        .expect("example modules are compatible")
}
