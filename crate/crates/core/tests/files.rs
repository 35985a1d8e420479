use std::fs;

use pqdtw_core::pq::{load_codebook, read_codes, save_codebook, write_codes};
use pqdtw_core::series::{load_ucr_tsv, write_ucr_tsv};
use pqdtw_core::{train, EncodedDataset, LabeledDataset, ModelBundle, TimeSeries, TrainParams, WarpingWindow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noisy(n: usize, len: usize, seed: u64) -> Vec<TimeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| TimeSeries::new((0..len).map(|_| rng.random_range(-1.0..1.0) * 1e-3 + rng.random::<f64>()).collect()).unwrap())
        .collect()
}

#[test]
fn tsv_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.tsv");
    let series = noisy(7, 19, 1);
    let labels = (0..7).map(|i| format!("c{}", i % 3)).collect();
    let data = LabeledDataset::new(series, Some(labels)).unwrap();
    write_ucr_tsv(&path, &data).unwrap();
    let back = load_ucr_tsv(&path).unwrap();
    assert_eq!(back.labels(), data.labels());
    for (a, b) in back.series().iter().zip(data.series()) {
        assert!(a.values().iter().zip(b.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn tsv_rejects_ragged_rows_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.tsv");
    fs::write(&path, "a\t1\t2\t3\nb\t1\t2\n").unwrap();
    let err = load_ucr_tsv(&path).unwrap_err().to_string();
    assert!(err.contains(":2"), "{err}");
}

#[test]
fn codebook_codes_and_bundle_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let series = noisy(40, 48, 2);
    let params = TrainParams::new(4, 16)
        .with_tail(2)
        .with_level(2)
        .with_window(WarpingWindow::SakoeChiba(3))
        .with_seed(4);
    let cb = train(&series, &params).unwrap();
    save_codebook(&cb, dir.path().join("cb.json")).unwrap();
    let cb2 = load_codebook(dir.path().join("cb.json")).unwrap();
    assert_eq!(cb2.to_json().unwrap(), cb.to_json().unwrap());

    let data = EncodedDataset {
        codes: cb.encode_all(&series).unwrap(),
        labels: Some((0..40).map(|i| format!("l{}", i % 4)).collect()),
    };
    write_codes(dir.path().join("codes.csv"), &data).unwrap();
    let back = read_codes(dir.path().join("codes.csv")).unwrap();
    assert_eq!(back.codes, data.codes);
    assert_eq!(back.labels, data.labels);

    for (a, b) in series.iter().zip(&data.codes) {
        assert_eq!(&cb2.encode(a).unwrap(), b);
        let x = cb.asym_table(a).unwrap().distance(b).unwrap();
        let y = cb2.asym_table(a).unwrap().distance(b).unwrap();
        assert_eq!(x.to_bits(), y.to_bits());
    }

    let bundle = ModelBundle::new(cb2, back, Default::default(), 49, false).unwrap();
    bundle.save(dir.path().join("m.json")).unwrap();
    let again = ModelBundle::load(dir.path().join("m.json")).unwrap();
    assert_eq!(again.to_json().unwrap(), bundle.to_json().unwrap());
    assert_eq!(again.symbol_ids(), vec!["l0", "l1", "l2", "l3"]);
}

#[test]
fn bundle_rejects_mismatched_resample_points() {
    let series = noisy(10, 16, 3);
    let cb = train(&series, &TrainParams::new(2, 4)).unwrap();
    let data = EncodedDataset {
        codes: cb.encode_all(&series).unwrap(),
        labels: Some(vec!["a".into(); 10]),
    };
    assert!(ModelBundle::new(cb, data, Default::default(), 16, false).is_err());
}
