use std::path::PathBuf;

use proptest::prelude::*;
use wharf::category::{compile, FSymbols, FusionRing};
use wharf::fib::build_fib_wha;
use wharf::formats::{
    format_sequence, parse_sequence, read_ctf, read_fsymbols, read_fusion, read_wha, to_json_string, write_ctf,
    write_wha, DenseTensor, FSymbolsJson, FusionJson, WhaJson,
};
use wharf::numerics::{CMatrix, C64};
use wharf::wha::verify_axioms;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn fibonacci_table_round_trips_exactly() {
    let alg = build_fib_wha();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.json");
    write_wha(&path, &alg).unwrap();
    assert_eq!(read_wha(&path).unwrap(), alg);
    // second write is byte-identical
    let first = std::fs::read_to_string(&path).unwrap();
    write_wha(&path, &read_wha(&path).unwrap()).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn json_layout_is_one_entry_per_line() {
    let text = to_json_string(&WhaJson::from_table(&build_fib_wha())).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["dim"], 13);
    let mult = json["mult"].as_array().unwrap();
    assert!(text.lines().filter(|l| l.trim_start().starts_with('[') && l.contains(',')).count() >= mult.len());
    // sparse lists are sorted lexicographically by their index columns
    let keys: Vec<Vec<u64>> = mult.iter().map(|e| e.as_array().unwrap()[..3].iter().map(|x| x.as_u64().unwrap()).collect()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn golden_fibonacci_file_matches_and_verifies() {
    let text = std::fs::read_to_string(data("fib.json")).unwrap();
    assert_eq!(text, to_json_string(&WhaJson::from_table(&build_fib_wha())).unwrap());
    let alg = read_wha(&data("fib.json")).unwrap();
    assert!(verify_axioms(&alg, 1e-10).pass);
}

#[test]
fn shipped_category_inputs_parse_and_compile() {
    for (fusion, fsym, dim) in [
        ("fib.fusion.json", "fib.fsymbols.json", 13),
        ("z2.fusion.json", "z2.fsymbols.json", 8),
        ("z2omega.fusion.json", "z2omega.fsymbols.json", 8),
    ] {
        let ring = read_fusion(&data(fusion)).unwrap();
        let f = read_fsymbols(&data(fsym), ring).unwrap();
        assert_eq!(compile(&f, 1e-9).unwrap().dim(), dim, "{fusion}");
    }
    assert_eq!(read_fusion(&data("fib.fusion.json")).unwrap(), FusionRing::fibonacci());
}

#[test]
fn category_json_round_trips() {
    for f in [FSymbols::fibonacci(), FSymbols::z2(false), FSymbols::z2(true)] {
        let ring_json = to_json_string(&FusionJson::from_ring(f.ring())).unwrap();
        let ring = serde_json::from_str::<FusionJson>(&ring_json).unwrap().to_ring().unwrap();
        assert_eq!(&ring, f.ring());
        let fj = to_json_string(&FSymbolsJson::from_fsymbols(&f)).unwrap();
        let back = serde_json::from_str::<FSymbolsJson>(&fj).unwrap().to_fsymbols(ring).unwrap();
        assert_eq!(back.entries(), f.entries());
        assert_eq!(back.kappa(), f.kappa());
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(serde_json::from_str::<WhaJson>("{\"dim\": 1}").is_err());
    assert!(serde_json::from_str::<FusionJson>("{\"labels\": [], \"unit\": \"I\", \"dual\": {}, \"N\": [], \"extra\": 1}").is_err());
    let mut w = WhaJson::from_table(&build_fib_wha());
    w.mult.push((99, 0, 0, 1.0, 0.0));
    assert!(w.to_table().is_err());
    let mut w = WhaJson::from_table(&build_fib_wha());
    w.basis.pop();
    assert!(w.to_table().is_err());
    // unknown label and duplicate entry in F-symbols
    let mut f = FSymbolsJson::from_fsymbols(&FSymbols::fibonacci());
    f.entries[0].0 = "sigma".into();
    assert!(f.to_fsymbols(FusionRing::fibonacci()).is_err());
    let mut f = FSymbolsJson::from_fsymbols(&FSymbols::fibonacci());
    f.entries.push(f.entries[0].clone());
    assert!(f.to_fsymbols(FusionRing::fibonacci()).is_err());
}

#[test]
fn ctf_header_layout() {
    let m = CMatrix::from_fn(2, 3, |r, c| C64::new(r as f64, c as f64));
    let mut buf = Vec::new();
    write_ctf(&mut buf, &DenseTensor::from_matrix(&m)).unwrap();
    assert_eq!(&buf[..9], b"WHARF-CTF");
    assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 2);
    assert_eq!(u32::from_le_bytes(buf[20..24].try_into().unwrap()), 2);
    assert_eq!(u32::from_le_bytes(buf[24..28].try_into().unwrap()), 3);
    // row-major: entry (0, 1) is the second pair
    let re = f64::from_le_bytes(buf[28 + 16..28 + 24].try_into().unwrap());
    let im = f64::from_le_bytes(buf[28 + 24..28 + 32].try_into().unwrap());
    assert_eq!((re, im), (0.0, 1.0));
    assert_eq!(read_ctf(&mut buf.as_slice()).unwrap().to_matrix().unwrap(), m);
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e300f64..1e300, -1.0f64..1.0, Just(0.0), Just(-0.0), Just(f64::MIN_POSITIVE)]
}

proptest! {
    #[test]
    fn ctf_round_trip(dims in prop::collection::vec(1usize..4, 0..4), seed in prop::collection::vec((finite(), finite()), 64)) {
        let n: usize = dims.iter().product();
        let data: Vec<C64> = (0..n).map(|i| C64::new(seed[i % 64].0, seed[i % 64].1)).collect();
        let t = DenseTensor::new(dims, data).unwrap();
        let mut buf = Vec::new();
        write_ctf(&mut buf, &t).unwrap();
        let back = read_ctf(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(back.dims, t.dims);
        prop_assert!(back.data.iter().zip(&t.data).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }

    #[test]
    fn sequence_round_trip(v in prop::collection::vec((finite(), finite()), 0..40)) {
        let v: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
        prop_assert_eq!(parse_sequence(&format_sequence(&v)).unwrap(), v);
    }

    #[test]
    fn truncated_ctf_is_an_error(cut in 0usize..60) {
        let t = DenseTensor::new(vec![2], vec![C64::new(1.0, 2.0), C64::new(3.0, 4.0)]).unwrap();
        let mut buf = Vec::new();
        write_ctf(&mut buf, &t).unwrap();
        prop_assume!(cut < buf.len());
        prop_assert!(read_ctf(&mut &buf[..cut]).is_err());
    }
}
