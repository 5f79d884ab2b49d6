use multitape::format::{export_machine, parse_machine};
use multitape::library::{self, AnyMachine, IDS};

#[test]
fn every_library_machine_round_trips() {
    for entry in library::all().unwrap() {
        let text = export_machine(&entry.machine).unwrap();
        let back = parse_machine(&text).unwrap_or_else(|e| panic!("{}: {e}", entry.id));
        assert_eq!(back, entry.machine, "{}", entry.id);
        assert_eq!(export_machine(&back).unwrap(), text, "{}", entry.id);
    }
}

#[test]
fn export_is_stable() {
    for id in IDS {
        let a = export_machine(&library::build(id, 0.125).unwrap().machine).unwrap();
        let b = export_machine(&library::build(id, 0.125).unwrap().machine).unwrap();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn exported_leq_runs_like_the_original() {
    let entry = library::build("leq", 0.125).unwrap();
    let AnyMachine::Classical(m) = parse_machine(&export_machine(&entry.machine).unwrap()).unwrap() else {
        panic!("leq parsed as quantum");
    };
    for w in ["", "ab", "aabb", "aab", "ba", "abab"] {
        assert_eq!(m.accepts(w).unwrap(), entry.oracle.member(w), "{w:?}");
    }
}
