macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(znormalize_and_paa, "znormalize_and_paa.rs");
example!(sax_words, "sax_words.rs");
example!(mindist_lower_bound, "mindist_lower_bound.rs");
example!(ndvi_bands, "ndvi_bands.rs");
example!(cube_roundtrip, "cube_roundtrip.rs");
example!(symbolize_scene, "symbolize_scene.rs");
example!(similarity_query, "similarity_query.rs");

#[test]
fn znormalize_and_paa_runs() {
    znormalize_and_paa::run_example().unwrap();
}

#[test]
fn sax_words_runs() {
    sax_words::run_example().unwrap();
}

#[test]
fn mindist_lower_bound_runs() {
    mindist_lower_bound::run_example().unwrap();
}

#[test]
fn ndvi_bands_runs() {
    ndvi_bands::run_example().unwrap();
}

#[test]
fn cube_roundtrip_runs() {
    cube_roundtrip::run_example().unwrap();
}

#[test]
fn symbolize_scene_runs() {
    symbolize_scene::run_example().unwrap();
}

#[test]
fn similarity_query_runs() {
    similarity_query::run_example().unwrap();
}
