//! Credit shares by byline position under both counting schemes.

use fssrank::scoring::byline_weights;
use fssrank::CountingScheme;

fn show(n: usize, scheme: CountingScheme, intramural: bool) {
    let weights: Vec<String> = byline_weights(n, scheme, intramural)
        .iter()
        .map(|w| format!("{w:.3}"))
        .collect();
    let kind = if intramural { "intramural" } else { "extramural" };
    println!("{scheme:>12} {kind:>10} n={n:<2} [{}]", weights.join(", "));
}

fn main() {
    for n in [1, 2, 3, 4, 5, 8] {
        show(n, CountingScheme::Alphabetical, false);
        show(n, CountingScheme::Positional, true);
        show(n, CountingScheme::Positional, false);
    }
}
