use std::fs;

use acd_core::catalog::{load_group, load_manifest, load_simple_data, load_simple_pack, write_group, GroupSpec};
use acd_core::socle::SocleShape;
use acd_core::Error;

#[test]
fn group_file_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let a5 = GroupSpec::parse("alternating(5)").unwrap().build().unwrap();
    let path = dir.path().join("a5.grp");
    fs::write(&path, write_group(&a5)).unwrap();
    assert_eq!(load_group(&path).unwrap().order(), 60);

    fs::write(&path, "degree: 4\n1 2 3\n").unwrap();
    assert!(matches!(load_group(&path), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(load_group(dir.path().join("missing.grp")), Err(Error::Io(_))));
}

#[test]
fn manifest_resolves_files_next_to_it() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("groups")).unwrap();
    fs::write(dir.path().join("groups/c5.grp"), "degree: 5\n1 2 3 4 0\n").unwrap();
    fs::write(
        dir.path().join("m.manifest"),
        "# two entries\nC5 = file(\"groups/c5.grp\") ; order = 5\nS3xC5 = direct(symmetric(3), file(\"groups/c5.grp\"))\n",
    )
    .unwrap();
    let entries = load_manifest(dir.path().join("m.manifest")).unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0].build(1000).unwrap().order(), 5);
    assert_eq!(entries[1].build(1000).unwrap().order(), 30);

    fs::write(dir.path().join("bad.manifest"), "C5 = file(\"groups/c5.grp\") ; order = 6\n").unwrap();
    let bad = load_manifest(dir.path().join("bad.manifest")).unwrap();
    assert!(matches!(bad[0].build(1000), Err(Error::ValidationFailed(_))));
}

#[test]
fn simple_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pack.txt");
    fs::write(&path, "name: A5\norder: 60\ndegrees: 1 3 3 4 5\nalpha: 4\naut: 0 2 1 3 4\n").unwrap();
    let a5 = load_simple_data(&path).unwrap();
    assert_eq!(a5.min_degree(), 3);
    let shape = SocleShape::parse("A5^3", &load_simple_pack(&path).unwrap()).unwrap();
    assert_eq!(shape.tuple_count(), 125);

    // degree squares sum to 61
    fs::write(&path, "name: A5\norder: 61\ndegrees: 1 3 3 4 5\nalpha: 4\n").unwrap();
    assert!(matches!(load_simple_data(&path), Err(Error::ValidationFailed(_))));
}
