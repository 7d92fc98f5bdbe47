use hullmeans::data::{Builtin, DatasetSpec, LabelColumn, load_delimited};

fn class_sizes(b: Builtin) -> (usize, usize, Vec<usize>) {
    let d = b.load().unwrap();
    let mut sizes = vec![0; d.n_classes()];
    for &l in d.labels().unwrap() {
        sizes[l] += 1;
    }
    (d.n_samples(), d.dim(), sizes)
}

#[test]
fn builtin_shapes() {
    assert_eq!(class_sizes(Builtin::Iris), (150, 4, vec![50, 50, 50]));
    assert_eq!(class_sizes(Builtin::Wine), (178, 13, vec![59, 71, 48]));
    assert_eq!(class_sizes(Builtin::Letter), (1594, 16, vec![805, 789]));
    let (n, d, mut sizes) = class_sizes(Builtin::Ruspini);
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!((n, d, sizes), (75, 2, vec![23, 20, 17, 15]));
    assert_eq!(class_sizes(Builtin::Synthetic1), (35, 2, vec![7; 5]));
    assert_eq!(class_sizes(Builtin::Synthetic2), (300, 2, vec![50; 6]));
}

#[test]
fn letter_classes_are_named() {
    let d = Builtin::Letter.load().unwrap();
    let mut names = d.class_names().to_vec();
    names.sort();
    assert_eq!(names, ["A", "D"]);
}

#[test]
fn loader_keeps_file_order() {
    let d = Builtin::Iris.load().unwrap();
    let first: Vec<usize> = d.labels().unwrap().iter().step_by(50).copied().collect();
    assert_eq!(first, vec![0, 1, 2]);
    let spec = DatasetSpec::csv(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/iris.data"),
        LabelColumn::Last,
    );
    assert_eq!(load_delimited(&spec).unwrap().values(), d.values());
}
