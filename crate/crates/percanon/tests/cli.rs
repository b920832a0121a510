//! End-to-end CLI behavior: exit codes, formats, determinism, round trips.

mod common;

use common::*;

use percanon::matrix::{is_jordan, parse_matrices};

fn fixture_arg(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn reduce_complex_fixture_prints_canonical_matrices() {
    let (code, out, err) = run_cli(&["reduce", &fixture_arg("triangle_filtration.txt")]);
    assert_eq!(code, 0, "stderr: {err}");
    let matrices = parse_matrices(&out).unwrap();
    assert_eq!(matrices.len(), 3); // dcanon, b, p
    let dcanon = &matrices[0];
    assert_eq!(
        dcanon.matrix,
        dense(
            fq(),
            &[
                vec![0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0, 1],
                vec![0, 0, 0, 0, 0, 0, 0],
            ]
        )
    );
    assert_eq!(dcanon.partition.as_ref().unwrap().blocks(), &[(0, 3), (1, 3), (2, 1)]);
    assert!(out.contains("# p (new order: 1 2 4 3 5 6 7)"));
}

#[test]
fn reduce_matrix_fixture_matches_complex_route() {
    let (code_m, out_m, _) = run_cli(&["reduce", &fixture_arg("triangle_degree_major.mat")]);
    let (code_c, out_c, _) = run_cli(&["reduce", &fixture_arg("triangle_filtration.txt")]);
    assert_eq!((code_m, code_c), (0, 0));
    assert_eq!(out_m, out_c);
}

#[test]
fn reduce_output_reparses_and_reverifies() {
    let (code, out, _) = run_cli(&[
        "reduce",
        "--emit-certificate",
        &fixture_arg("triangle_degree_major.mat"),
    ]);
    assert_eq!(code, 0);
    let ms = parse_matrices(&out).unwrap();
    assert_eq!(ms.len(), 6); // dcanon, b, p, r, v, vhat
    let (dcanon, b, p, r, v, vhat) =
        (&ms[0].matrix, &ms[1].matrix, &ms[2].matrix, &ms[3].matrix, &ms[4].matrix, &ms[5].matrix);
    let d = parse_matrices(&fixture("triangle_degree_major.mat")).unwrap()[0].matrix.clone();
    assert_eq!(d.mul(v).unwrap(), *r);
    assert_eq!(d.mul(vhat).unwrap(), *r);
    assert_eq!(vhat.mul(dcanon).unwrap(), *r);
    assert_eq!(d.mul(b).unwrap(), b.mul(dcanon).unwrap());
    // conjugate dcanon by the permutation read back from the file
    let perm_entries: Vec<usize> = (0..7)
        .map(|c| p.column(c).first().map(|(r, _)| *r).unwrap())
        .collect();
    let perm = percanon::matrix::Permutation::new(perm_entries).unwrap();
    assert!(is_jordan(&dcanon.permute_conjugate(&perm).unwrap()));
}

#[test]
fn reduce_output_sections_round_trip_byte_exactly() {
    let (code, out, _) = run_cli(&["reduce", &fixture_arg("triangle_degree_major.mat")]);
    assert_eq!(code, 0);
    let ms = parse_matrices(&out).unwrap();
    let partition = ms[0].partition.as_ref();
    let rewritten = format!(
        "# dcanon\n{}# b\n{}# p (new order: 1 2 4 3 5 6 7)\n{}",
        percanon::matrix::write_matrix(&ms[0].matrix, partition),
        percanon::matrix::write_matrix(&ms[1].matrix, partition),
        percanon::matrix::write_matrix(&ms[2].matrix, None),
    );
    assert_eq!(out, rewritten);
}

#[test]
fn solid_tetrahedron_by_face_completion() {
    let dir = std::env::temp_dir().join("percanon_cli_tet");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tet.txt");
    std::fs::write(&path, "1 1 2 3 4\n").unwrap();
    let (code, out, _) =
        run_cli(&["barcodes", "--close", "--format", "csv", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // everything enters at once: contractible, one infinite component bar
    assert_eq!(out.lines().count(), 2);
    assert_eq!(out.lines().nth(1).unwrap(), "0,1,inf,1,");
    let (code, out, _) = run_cli(&["decompose", "--close", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // 15 cells pair off into 7 two-element summands plus the surviving vertex
    assert_eq!(out.lines().count(), 8);
    let members: usize = out.lines().map(|l| l.matches('@').count()).sum();
    assert_eq!(members, 15);
}

#[test]
fn reduce_zero_matrix() {
    let dir = std::env::temp_dir().join("percanon_cli_zero");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero.mat");
    std::fs::write(&path, "matrix 3 3 q\n").unwrap();
    let (code, out, _) = run_cli(&["reduce", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let ms = parse_matrices(&out).unwrap();
    assert!(ms[0].matrix.is_zero());
    assert_eq!(ms[1].matrix, percanon::matrix::ColumnMatrix::identity(3, fq()));
}

#[test]
fn reduce_rejects_malformed_input_with_line_numbers() {
    let dir = std::env::temp_dir().join("percanon_cli_bad");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.mat");
    std::fs::write(&path, "matrix 2 2 q\n1 1 what\n").unwrap();
    let (code, _, err) = run_cli(&["reduce", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn reduce_rejects_non_differential_matrix() {
    let dir = std::env::temp_dir().join("percanon_cli_nondiff");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nondiff.mat");
    std::fs::write(&path, "matrix 2 2 q\n1 1 1\n").unwrap();
    let (code, _, err) = run_cli(&["reduce", path.to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {err}");
}

#[test]
fn reduce_level_major_ordering() {
    let (code, out, _) = run_cli(&[
        "reduce",
        "--ordering",
        "level",
        &fixture_arg("triangle_filtration.txt"),
    ]);
    assert_eq!(code, 0);
    let ms = parse_matrices(&out).unwrap();
    assert!(ms[0].partition.is_none());
    let expect = percanon::matrix::ColumnMatrix::from_entries(
        7,
        7,
        fq(),
        [(1usize, 2usize), (3, 4), (5, 6)].map(|(r, c)| (r, c, fq().one())),
    )
    .unwrap();
    assert_eq!(ms[0].matrix, expect);
}

#[test]
fn barcodes_json_of_four_point_fixture() {
    let (code, out, _) = run_cli(&[
        "barcodes",
        "--format",
        "json",
        &fixture_arg("alpha_four_points.txt"),
    ]);
    assert_eq!(code, 0);
    let bars: serde_json::Value = serde_json::from_str(&out).unwrap();
    let degree_one: Vec<&serde_json::Value> =
        bars.as_array().unwrap().iter().filter(|b| b["degree"] == 1).collect();
    assert_eq!(degree_one.len(), 2);
    for b in degree_one {
        assert_eq!(b["birth_level"], 3);
        assert_eq!(b["death_level"], 4);
        assert_eq!(b["birth_value"], 1.12);
        assert_eq!(b["death_value"], 1.25);
    }
}

#[test]
fn barcodes_text_of_triangle_fixture() {
    let (code, out, _) = run_cli(&["barcodes", &fixture_arg("triangle_filtration.txt")]);
    assert_eq!(code, 0);
    assert!(out.contains("degree 0"));
    assert!(out.contains("[1,∞)"));
    assert!(out.contains("[1,2)"));
    assert!(out.contains("[3,4)"));
    assert!(out.contains("[5,6)"));
}

#[test]
fn barcodes_of_empty_complex() {
    let dir = std::env::temp_dir().join("percanon_cli_empty");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.txt");
    std::fs::write(&path, "# nothing\n").unwrap();
    let (code, out, _) = run_cli(&["barcodes", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "(no bars)\n");
    let (code, out, _) =
        run_cli(&["barcodes", "--format", "json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "[]");
}

#[test]
fn barcodes_from_point_cloud_runs_rips_first() {
    let (code, out, _) = run_cli(&[
        "barcodes",
        "--max-radius",
        "0.8",
        "--format",
        "csv",
        &fixture_arg("points_square.txt"),
    ]);
    assert_eq!(code, 0);
    // the square's cycle is born with the sides and dies with the diagonal
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "degree,birth_level,death_level,birth_value,death_value");
    assert!(lines.iter().any(|l| l.starts_with("1,2,3,0.5,")), "out: {out}");
}

#[test]
fn barcodes_rejects_level_major() {
    let (code, _, err) = run_cli(&[
        "barcodes",
        "--ordering",
        "level",
        &fixture_arg("triangle_filtration.txt"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("degree-major"));
}

#[test]
fn decompose_lists_the_four_summands() {
    let (code, out, _) = run_cli(&["decompose", &fixture_arg("triangle_filtration.txt")]);
    assert_eq!(code, 0);
    let expect = "\
[1,∞)_0  kind J  degree 0  creator [1]@1
[1,2)_0  kind K  degree 0  creator [2]@1, destroyer [1 2]@2
[3,4)_0  kind K  degree 0  creator [3]@3, destroyer [2 3]@4
[5,6)_1  kind K  degree 1  creator [1 3]@5, destroyer [1 2 3]@6
";
    assert_eq!(out, expect);
}

#[test]
fn decompose_single_vertex_is_one_infinite_summand() {
    let dir = std::env::temp_dir().join("percanon_cli_vertex");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("vertex.txt");
    std::fs::write(&path, "1 9\n").unwrap();
    let (code, out, _) = run_cli(&["decompose", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "[1,∞)_0  kind J  degree 0  creator [9]@1\n");
}

#[test]
fn decompose_json_members_partition_the_basis() {
    let (code, out, _) = run_cli(&[
        "decompose",
        "--format",
        "json",
        &fixture_arg("alpha_four_points.txt"),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let total_members: usize =
        v.as_array().unwrap().iter().map(|s| s["members"].as_array().unwrap().len()).sum();
    assert_eq!(total_members, 11); // every cell appears exactly once
}

#[test]
fn verify_accepts_the_graded_fixture() {
    let (code, out, _) = run_cli(&["verify", &fixture_arg("triangle_degree_major.mat")]);
    assert_eq!(code, 0, "out: {out}");
    assert!(out.contains("check rank(D) equals number of nonzero columns of R: ok"));
    assert!(out.trim_end().ends_with("verified"));
}

#[test]
fn verify_rejects_non_differential_input() {
    let dir = std::env::temp_dir().join("percanon_cli_verify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nondiff.mat");
    std::fs::write(&path, "matrix 2 2 z2\n1 1 1\n2 2 1\n").unwrap();
    let (code, _, err) = run_cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("rejected"));
}

#[test]
fn verify_runs_brute_force_on_all_small_mod2_differentials() {
    let dir = std::env::temp_dir().join("percanon_cli_exhaustive");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.mat");
    for m in 1..=4 {
        for d in percanon::oracle::all_differentials_mod2(m) {
            std::fs::write(&path, percanon::matrix::write_matrix(&d, None)).unwrap();
            let (code, out, err) = run_cli(&["verify", path.to_str().unwrap()]);
            assert_eq!(code, 0, "matrix:\n{d}\nout: {out}\nerr: {err}");
            assert!(out.contains("check exhaustive canonical form agrees: ok"));
        }
    }
}

#[test]
fn rips_emits_the_complex_file_format() {
    let (code, out, _) = run_cli(&[
        "rips",
        "--max-dim",
        "2",
        "--max-radius",
        "0.8",
        &fixture_arg("points_square.txt"),
    ]);
    assert_eq!(code, 0);
    let fc = percanon::complex::parse_filtered_complex(&out, false).unwrap();
    assert!(percanon::complex::validate(&fc).is_empty());
    assert_eq!(fc.levels(), vec![1, 2, 3]);
    // 4 vertices, 4 sides, 2 diagonals, 4 triangles; no radius exclusions at 0.8
    assert_eq!(fc.len(), 14);
}

#[test]
fn rips_respects_the_radius_bound() {
    let (code, out, _) = run_cli(&[
        "rips",
        "--max-dim",
        "2",
        "--max-radius",
        "0.5",
        &fixture_arg("points_square.txt"),
    ]);
    assert_eq!(code, 0);
    let fc = percanon::complex::parse_filtered_complex(&out, false).unwrap();
    // diagonals (length sqrt 2 > 1) are excluded, so no triangles either
    assert_eq!(fc.len(), 8);
}

#[test]
fn drop_empty_flag_controls_empty_bars() {
    // every edge and the triangle enter together, so the one-cycle is born
    // and destroyed at the same level
    let dir = std::env::temp_dir().join("percanon_cli_dropempty");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("instant.txt");
    std::fs::write(&path, "0 1\n0 2\n0 3\n1 1 2\n1 1 3\n1 2 3\n1 1 2 3\n").unwrap();
    let (code, out, _) =
        run_cli(&["barcodes", "--format", "csv", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(!out.lines().any(|l| l.starts_with("1,")), "out: {out}");
    let (code, out, _) = run_cli(&[
        "barcodes",
        "--format",
        "csv",
        "--drop-empty",
        "false",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("1,2,2,")), "out: {out}");
    // the empty interval stays visible in the summand listing either way
    let (_, out, _) = run_cli(&["decompose", path.to_str().unwrap()]);
    assert!(out.contains("[2,2)_1"), "out: {out}");
}

#[test]
fn close_flag_completes_missing_faces() {
    let dir = std::env::temp_dir().join("percanon_cli_close");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("edges_only.txt");
    std::fs::write(&path, "1 1 2\n2 2 3\n").unwrap();
    let (code, _, err) = run_cli(&["barcodes", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("missing its face"), "stderr: {err}");
    let (code, out, _) =
        run_cli(&["barcodes", "--close", "--format", "csv", path.to_str().unwrap()]);
    assert_eq!(code, 0, "out: {out}");
    assert!(out.contains("0,1,inf"), "out: {out}");
}

#[test]
fn field_flags_are_validated() {
    let (code, _, err) = run_cli(&[
        "barcodes",
        "--field",
        "zp",
        &fixture_arg("triangle_filtration.txt"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("--prime"));
    let (code, _, err) = run_cli(&[
        "barcodes",
        "--field",
        "zp",
        "--prime",
        "6",
        &fixture_arg("triangle_filtration.txt"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not prime"));
    let (code, _, _) = run_cli(&[
        "barcodes",
        "--field",
        "zp",
        "--prime",
        "5",
        &fixture_arg("triangle_filtration.txt"),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn mod_two_pipeline_gives_the_same_bars() {
    let (_, out_q, _) = run_cli(&[
        "barcodes",
        "--format",
        "csv",
        &fixture_arg("alpha_four_points.txt"),
    ]);
    let (_, out_2, _) = run_cli(&[
        "barcodes",
        "--field",
        "zp",
        "--prime",
        "2",
        "--format",
        "csv",
        &fixture_arg("alpha_four_points.txt"),
    ]);
    assert_eq!(out_q, out_2);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["reduce", "--emit-certificate"],
        vec!["barcodes", "--format", "json"],
        vec!["decompose", "--format", "csv"],
    ] {
        let mut argv: Vec<&str> = args.clone();
        let path = fixture_arg("triangle_filtration.txt");
        argv.push(&path);
        let (c1, o1, e1) = run_cli(&argv);
        let (c2, o2, e2) = run_cli(&argv);
        assert_eq!((c1, &o1, &e1), (c2, &o2, &e2));
    }
}

#[test]
fn stdin_dash_reads_standard_input() {
    use std::io::Write as _;
    use std::process::{Command, Stdio};
    let exe = env!("CARGO_BIN_EXE_percanon");
    let mut child = Command::new(exe)
        .args(["reduce", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(fixture("triangle_degree_major.mat").as_bytes())
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("# p (new order: 1 2 4 3 5 6 7)"));
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let (code, _, err) = run_cli(&["barcodes", "--wat", "x"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("reduce"));
}
