import io
from fractions import Fraction

import numpy as np
import pytest

from src.data_pipeline.input_loader import (alpha_from_dict, load_alpha, load_relation_system, load_test_function,
                                            parse_inline_alpha, relation_system_from_dict, test_function_from_terms)
from src.data_pipeline.zero_cache import HEADER, MAGIC, load_cache, write_cache
from src.data_pipeline.zero_store import ZeroSet, count_upto, load_zeros, n_asymptotic, parse_zeros
from src.utils.errors import (AlphaError, CacheBadMagicError, CacheTruncatedError, CacheVersionError,
                              DomainError, InsufficientDataError, NonMonotoneError, RankDeficientError,
                              RelationError, TestFunctionError, ZeroParseError)

from tests.conftest import FIRST_ZEROS


def test_parse_skips_comments_and_blank_lines():
    text = "# Odlyzko-style table\n\n14.134725142\n21.022039639\n   \n25.010857580\n"
    zeros = parse_zeros(io.StringIO(text))
    assert zeros.count == 3
    assert zeros.t_max == pytest.approx(25.010857580)


def test_parse_empty_source():
    zeros = parse_zeros(io.StringIO(""))
    assert zeros.count == 0
    assert zeros.t_max is None


def test_non_monotone_reports_line_number():
    text = "14.134725142\n21.022039639\n20.0\n"
    with pytest.raises(NonMonotoneError) as excinfo:
        parse_zeros(io.StringIO(text))
    assert excinfo.value.line == 3
    assert "line 3" in str(excinfo.value)


def test_repeated_value_is_non_monotone():
    with pytest.raises(NonMonotoneError):
        parse_zeros(io.StringIO("14.1\n14.1\n"))


@pytest.mark.parametrize("bad", ["abc", "-3.0", "0", "nan", "1_0", "inf", "0x1p4"])
def test_rejects_bad_tokens(bad):
    with pytest.raises(ZeroParseError) as excinfo:
        parse_zeros(io.StringIO(f"14.1\n{bad}\n"))
    assert excinfo.value.line == 2


def test_non_ascii_bytes_report_line_number():
    with pytest.raises(ZeroParseError) as excinfo:
        parse_zeros(io.BytesIO("14.1\n21.0\n25.0\u00b5\n".encode("utf-8")))
    assert excinfo.value.line == 3


def test_default_height_of_empty_table():
    assert ZeroSet(np.array(FIRST_ZEROS)).default_height() == FIRST_ZEROS[-1]
    with pytest.raises(InsufficientDataError):
        ZeroSet(np.array([])).default_height()


def test_count_upto_includes_heights_equal_to_T():
    zeros = ZeroSet(np.array(FIRST_ZEROS))
    assert count_upto(zeros, 0.0) == 0
    assert count_upto(zeros, 14.134725142) == 1
    assert count_upto(zeros, 30.0) == 3
    assert count_upto(zeros, 1e9) == 10
    with pytest.raises(DomainError):
        count_upto(zeros, -1.0)


def test_slice_and_height_of():
    zeros = ZeroSet(np.array(FIRST_ZEROS))
    assert zeros.slice_upto(25.1).tolist() == FIRST_ZEROS[:3]
    assert zeros.height_of(1) == FIRST_ZEROS[0]
    assert zeros.height_of(10) == FIRST_ZEROS[-1]
    with pytest.raises(DomainError):
        zeros.height_of(11)


def test_zero_set_is_read_only():
    zeros = ZeroSet(np.array(FIRST_ZEROS))
    with pytest.raises(ValueError):
        zeros.gammas[0] = 1.0


def test_n_asymptotic_anchor():
    assert abs(n_asymptotic(42653549.761) - 1e8) <= 10


def test_n_asymptotic_tracks_observed_count(true_zeros):
    T = true_zeros.t_max
    assert abs(n_asymptotic(T) - true_zeros.count) < 2
    with pytest.raises(DomainError):
        n_asymptotic(1.0)


def test_cache_round_trip_preserves_bits(true_zeros):
    buffer = io.BytesIO()
    written = write_cache(true_zeros, buffer)
    assert written == HEADER.size + 8 * true_zeros.count
    buffer.seek(0)
    assert load_cache(buffer) == true_zeros


def test_cache_of_empty_set():
    buffer = io.BytesIO()
    write_cache(ZeroSet(np.array([])), buffer)
    buffer.seek(0)
    assert load_cache(buffer).count == 0


def test_cache_bad_magic():
    with pytest.raises(CacheBadMagicError):
        load_cache(io.BytesIO(b"NOPE" + b"\x00" * 12))


def test_cache_version_mismatch():
    with pytest.raises(CacheVersionError):
        load_cache(io.BytesIO(HEADER.pack(MAGIC, 2, 0)))


def test_cache_truncated_payload():
    data = HEADER.pack(MAGIC, 1, 3) + np.array([1.0, 2.0]).astype("<f8").tobytes()
    with pytest.raises(CacheTruncatedError):
        load_cache(io.BytesIO(data))


def test_cache_truncated_header():
    with pytest.raises(CacheTruncatedError):
        load_cache(io.BytesIO(MAGIC + b"\x01"))


def test_load_zeros_detects_format(tmp_path, zeros_text_file, true_zeros):
    from_text = load_zeros(str(zeros_text_file))
    cache_path = tmp_path / "zeros.zfpz"
    with open(cache_path, "wb") as handle:
        write_cache(from_text, handle)
    from_cache = load_zeros(str(cache_path))
    assert from_text == true_zeros
    assert from_cache == from_text
    assert from_cache.dataset_id == "zeros.zfpz"


def test_relation_system_document(example_1):
    payload = {"n": 2, "rows": [{"b": [1, 1], "a": 1, "q": 1, "p": 2}, {"b": [1, -1], "a": 1, "q": 2, "p": 3}]}
    assert relation_system_from_dict(payload) == example_1


def test_relation_system_document_is_validated():
    payload = {"n": 2, "rows": [{"b": [1, 1], "a": 1, "q": 1, "p": 2}, {"b": [2, 2], "a": 1, "q": 1, "p": 3}]}
    with pytest.raises(RankDeficientError):
        relation_system_from_dict(payload)


def test_alpha_document_needs_one_form():
    with pytest.raises(AlphaError):
        alpha_from_dict({})
    with pytest.raises(AlphaError):
        alpha_from_dict({"decimal": ["0.1"], "exact": [[{"num": 1, "den": 1, "p": 2}]]})


def test_alpha_document_exact_form():
    alpha = alpha_from_dict({"exact": [[{"num": 1, "den": 2, "p": 2}, {"num": 1, "den": 4, "p": 3}],
                                       [{"num": 1, "den": 2, "p": 2}, {"num": -1, "den": 4, "p": 3}]]})
    assert alpha.exact[0] == ((Fraction(1, 2), 2), (Fraction(1, 4), 3))
    assert alpha.as_floats()[0] > alpha.as_floats()[1] > 0


def test_inline_alpha():
    alpha = parse_inline_alpha("0.5, 0.75")
    assert alpha.as_floats() == (0.5, 0.75)


def test_test_function_terms_are_completed():
    h = test_function_from_terms([{"m": [1, 1], "re": 0.5, "im": 0.25}])
    assert h.coeffs[(-1, -1)] == complex(0.5, -0.25)


def test_test_function_rejects_inconsistent_duplicates():
    with pytest.raises(TestFunctionError):
        test_function_from_terms([{"m": [1, 0], "re": 0.5}, {"m": [-1, 0], "re": 0.4}])
    with pytest.raises(TestFunctionError):
        test_function_from_terms({"m": [1, 0]})


def test_inline_alpha_rejects_non_decimals():
    with pytest.raises(AlphaError):
        parse_inline_alpha("abc, 0.5")


def test_test_function_term_without_frequency():
    with pytest.raises(TestFunctionError):
        test_function_from_terms([{"re": 0.5}])
    with pytest.raises(TestFunctionError):
        test_function_from_terms([{"m": [1, "x"], "re": 0.5}])


@pytest.mark.parametrize("loader, error", [
    (load_relation_system, RelationError),
    (load_alpha, AlphaError),
    (load_test_function, TestFunctionError),
])
def test_malformed_json_documents(tmp_path, loader, error):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2, "rows": [')
    with pytest.raises(error):
        loader(str(path))
    path.write_bytes(b'{"n": "\xff"}')
    with pytest.raises(error):
        loader(str(path))


def test_n_asymptotic_at_sampled_heights(thousand_zeros):
    heights = np.random.default_rng(7).uniform(thousand_zeros.gammas[0], thousand_zeros.t_max, size=100)
    for T in heights:
        assert abs(n_asymptotic(T) - thousand_zeros.count_upto(T)) <= 10


def test_n_asymptotic_at_sampled_heights_on_real_zeros(real_zeros):
    if real_zeros.count < 100_000:
        pytest.skip("needs at least 10^5 zeros")
    top = real_zeros.height_of(100_000)
    for T in np.random.default_rng(11).uniform(real_zeros.gammas[0], top, size=100):
        assert abs(n_asymptotic(T) - real_zeros.count_upto(T)) <= 10
