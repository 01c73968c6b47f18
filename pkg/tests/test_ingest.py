import hashlib
import importlib.resources
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from compreg import ingest
from compreg.errors import DuplicateIdError, ParseError, ValidationError
from compreg.ingest import (
    HEADER,
    IngestWarning,
    MatchRecord,
    MatchTable,
    parse_matches,
    serialize_matches,
    to_regression_dataset,
)

ROW_1 = "1,48.00,12.00,2.67,37.33,1"
ROW_64 = "64,54.00,8.00,5.00,33.00,0"


def text_of(*rows):
    return "\n".join((HEADER,) + rows) + "\n"


class TestParse:
    def test_single_row(self):
        table = parse_matches(text_of(ROW_1))
        rec = table.records[0]
        assert rec == MatchRecord(1, 48.00, 12.00, 2.67, 37.33, 1)

    def test_row_64(self):
        rec = parse_matches(text_of(ROW_64)).records[0]
        assert rec.match_id == 64
        assert rec.percentages == (54.00, 8.00, 5.00, 33.00)
        assert rec.z == 0

    def test_comments_and_blank_lines_skipped(self):
        text = "# transcription notes\n\n" + HEADER + "\n# inline comment\n" + ROW_1 + "\n"
        assert len(parse_matches(text)) == 1

    def test_trailing_newline_optional(self):
        assert len(parse_matches(HEADER + "\n" + ROW_1)) == 1

    def test_order_preserved(self):
        table = parse_matches(text_of(ROW_64, ROW_1))
        assert [r.match_id for r in table.records] == [64, 1]

    def test_accepts_iterable_of_lines(self):
        table = parse_matches([HEADER, ROW_1])
        assert len(table) == 1

    def test_bad_header(self):
        with pytest.raises(ParseError) as err:
            parse_matches("id,a,b,s,e,z\n" + ROW_1)
        assert err.value.line == 1

    def test_wrong_field_count(self):
        with pytest.raises(ParseError) as err:
            parse_matches(text_of("1,48.00,12.00,2.67,37.33"))
        assert err.value.line == 2

    def test_non_numeric_percentage(self):
        with pytest.raises(ParseError) as err:
            parse_matches(text_of("1,48.00,twelve,2.67,37.33,1"))
        assert (err.value.line, err.value.column) == (2, 3)

    def test_non_integer_id(self):
        with pytest.raises(ParseError) as err:
            parse_matches(text_of("1.5,48.00,12.00,2.67,37.33,1"))
        assert err.value.column == 1

    def test_non_integer_z(self):
        with pytest.raises(ParseError) as err:
            parse_matches(text_of("1,48.00,12.00,2.67,37.33,0.5"))
        assert err.value.column == 6

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_matches("")

    def test_z_out_of_domain(self):
        with pytest.raises(ValidationError) as err:
            parse_matches(text_of("1,48.00,12.00,2.67,37.33,2"))
        assert err.value.match_id == 1

    def test_nonpositive_percentage(self):
        with pytest.raises(ValidationError):
            parse_matches(text_of("1,48.00,0.00,14.67,37.33,1"))

    def test_sum_violation_strict(self):
        with pytest.raises(ValidationError) as err:
            parse_matches(text_of("7,50.00,20.00,10.00,30.00,0"))
        assert err.value.match_id == 7
        assert "sum" in err.value.invariant

    def test_sum_violation_lenient_warns(self):
        with pytest.warns(IngestWarning):
            table = parse_matches(text_of("7,50.00,20.00,10.00,30.00,0"), strict=False)
        assert len(table) == 1

    def test_duplicate_id(self):
        with pytest.raises(DuplicateIdError):
            parse_matches(text_of(ROW_1, ROW_1))

    def test_tie_between_attack_and_error_is_legal(self):
        rec = parse_matches(text_of("98,45.33,6.67,2.67,45.33,0")).records[0]
        assert rec.attack_pct == rec.error_pct


class TestSerialize:
    def test_round_trip(self):
        table = parse_matches(text_of(ROW_1, ROW_64, "98,45.33,6.67,2.67,45.33,0"))
        assert parse_matches(serialize_matches(table)) == table

    def test_round_trip_bundled(self, bundled_table):
        assert parse_matches(serialize_matches(bundled_table)) == bundled_table


class TestBundledDataset:
    def test_row_and_covariate_counts(self, bundled_table):
        assert len(bundled_table) == 128
        zs = [r.z for r in bundled_table]
        assert zs.count(1) == 63
        assert zs.count(0) == 65

    def test_ids_complete_and_ordered(self, bundled_table):
        assert [r.match_id for r in bundled_table] == list(range(1, 129))

    def test_content_digest(self):
        raw = (importlib.resources.files("compreg")
               .joinpath("data/table_a.csv").read_bytes())
        assert hashlib.sha256(raw).hexdigest() == ingest.TABLE_A_SHA256

    def test_every_row_passes_strict_validation(self, bundled_table):
        for rec in bundled_table:
            assert abs(sum(rec.percentages) - 100.0) <= ingest.PCT_SUM_TOLERANCE

    def test_match_98_tie(self, bundled_table):
        rec = bundled_table.records[97]
        assert rec.match_id == 98
        assert rec.attack_pct == rec.error_pct == 45.33


class TestToRegressionDataset:
    def test_shapes(self, bundled_table, bundled_dataset):
        assert bundled_dataset.n == 128
        assert bundled_dataset.g == 3
        assert bundled_dataset.p == 1

    def test_first_row_against_direct_logs(self, bundled_dataset):
        expected = (math.log(48.00 / 37.33), math.log(12.00 / 37.33),
                    math.log(2.67 / 37.33))
        assert_allclose(bundled_dataset.responses[0], expected, atol=1e-12)
        assert bundled_dataset.covariates[0, 0] == 1.0

    def test_row_alignment(self, bundled_table, bundled_dataset):
        rec = bundled_table.records[63]
        assert rec.match_id == 64
        expected = math.log(rec.attack_pct / rec.error_pct)
        assert bundled_dataset.responses[63, 0] == pytest.approx(expected, abs=1e-12)
        assert bundled_dataset.covariates[63, 0] == float(rec.z)

    def test_uniform_row_maps_to_zero(self):
        table = parse_matches(text_of("5,25.00,25.00,25.00,25.00,0"))
        ds = to_regression_dataset(MatchTable((table.records[0],
                                               parse_matches(text_of(ROW_1)).records[0])))
        assert_allclose(ds.responses[0], (0.0, 0.0, 0.0), atol=1e-15)
