use dqes_core::*;

#[test]
fn observable_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("dqes-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["H2_075", "HeH+_100"] {
        let obs = molecule_fixture(name).unwrap();
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, obs.to_json()).unwrap();
        let back = Observable::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, obs);
        assert_eq!(back.content_hash(), obs.content_hash());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn larger_observable_from_text() {
    // A user-supplied 4-qubit operator goes through the same sweep path as the fixtures.
    let text = r#"{"n": 4, "terms": [
        {"coeff": -0.5, "pauli": "ZIII"},
        {"coeff": 0.25, "pauli": "XXII"},
        {"coeff": 0.125, "pauli": "IIYY"},
        {"coeff": 1.0, "pauli": "IIII"}
    ]}"#;
    let obs = Observable::from_json(text).unwrap();
    assert_eq!(obs.num_qubits(), 4);
    let report = run_partial_dqes(&obs, 2).unwrap();
    assert_eq!(report.records.len(), 6 * 5 * 4);
    let e0 = exact_spectrum(&obs).unwrap().ground_energy;
    assert!(report.records.iter().all(|r| r.energy >= e0 - 1e-12));
}

#[test]
fn graph_file_round_trip() {
    let g = random_graph(9, 0.4, 21).unwrap();
    let text = g.to_text(&["seed 21".to_string()]);
    let back = GraphSpec::from_text(&text).unwrap();
    assert_eq!(back.node_count(), 9);
    assert_eq!(back.edges(), g.edges());
    assert_eq!(
        maxcut_hamiltonian(&back).unwrap().content_hash(),
        maxcut_hamiltonian(&g).unwrap().content_hash()
    );
}

#[test]
fn mub_export_round_trip() {
    for n in 1..=3 {
        let set = build_full_mub_set(n).unwrap();
        let back = MubSet::from_json(&set.to_json()).unwrap();
        assert!(verify_mub_set(&back, 1e-10).passed);
        assert_eq!(back.num_states(), set.num_states());
    }
}
