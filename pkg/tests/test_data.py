import pytest

from molbridge.data import dataset_digest, featurize_samples, load_dataset
from molbridge.errors import (
    EmptyDatasetError,
    MalformedRowError,
    MissingColumnError,
)


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


WELL_FORMED = "smiles_1,smiles_2,label\nCCO,CN,0\nCC,CCN,1\nC,O,1\n"


class TestLoad:
    def test_well_formed(self, tmp_path):
        result = load_dataset(write(tmp_path, WELL_FORMED))
        assert len(result.samples) == 3
        assert result.n_classes == 2
        assert result.quarantined == []
        assert result.samples[0].smiles_1 == "CCO"
        assert result.samples[0].label == 0

    def test_file_order_preserved(self, tmp_path):
        result = load_dataset(write(tmp_path, WELL_FORMED))
        assert [s.smiles_2 for s in result.samples] == ["CN", "CCN", "O"]

    def test_quarantine_keeps_rest(self, tmp_path):
        text = ("smiles_1,smiles_2,label\n"
                "CCO,CN,0\n"
                "C@C,CN,1\n"        # stereo token, unsupported
                "CC,CC,1\n")
        result = load_dataset(write(tmp_path, text))
        assert len(result.samples) == 2
        assert len(result.quarantined) == 1
        assert result.quarantined[0].line == 3
        assert "position" in result.quarantined[0].reason

    def test_tab_delimited(self, tmp_path):
        text = "smiles_1\tsmiles_2\tlabel\nCCO\tCN\t2\n"
        result = load_dataset(write(tmp_path, text))
        assert result.n_classes == 3

    def test_extra_columns_ignored(self, tmp_path):
        text = "id,smiles_1,smiles_2,label\n7,CCO,CN,0\n8,C,N,1\n"
        result = load_dataset(write(tmp_path, text))
        assert len(result.samples) == 2

    def test_blank_lines_skipped(self, tmp_path):
        result = load_dataset(write(tmp_path, WELL_FORMED + "\n\n"))
        assert len(result.samples) == 3


class TestLoadErrors:
    def test_missing_column(self, tmp_path):
        with pytest.raises(MissingColumnError):
            load_dataset(write(tmp_path, "a,b\nCCO,CN\n"))

    def test_missing_header_entirely(self, tmp_path):
        with pytest.raises(MissingColumnError):
            load_dataset(write(tmp_path, "CCO,CN,0\nCC,CC,1\n"))

    def test_non_integer_label(self, tmp_path):
        with pytest.raises(MalformedRowError) as exc:
            load_dataset(write(tmp_path, "smiles_1,smiles_2,label\nCCO,CN,x\n"))
        assert ":2:" in str(exc.value)

    def test_negative_label(self, tmp_path):
        with pytest.raises(MalformedRowError):
            load_dataset(write(tmp_path, "smiles_1,smiles_2,label\nCCO,CN,-1\n"))

    def test_short_row(self, tmp_path):
        with pytest.raises(MalformedRowError):
            load_dataset(write(tmp_path, "smiles_1,smiles_2,label\nCCO,CN\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(EmptyDatasetError):
            load_dataset(write(tmp_path, ""))

    def test_all_rows_quarantined(self, tmp_path):
        with pytest.raises(EmptyDatasetError):
            load_dataset(write(tmp_path,
                               "smiles_1,smiles_2,label\nC@C,CN,0\n"))


class TestDigest:
    def test_stable_and_content_sensitive(self, tmp_path):
        p1 = write(tmp_path, WELL_FORMED, "a.csv")
        p2 = write(tmp_path, WELL_FORMED, "b.csv")
        p3 = write(tmp_path, WELL_FORMED + "C,N,0\n", "c.csv")
        assert dataset_digest(p1) == dataset_digest(p2)
        assert dataset_digest(p1) != dataset_digest(p3)
        assert len(dataset_digest(p1)) == 64


class TestFeaturizeSamples:
    def test_pairs_align_with_samples(self, tmp_path):
        result = load_dataset(write(tmp_path, WELL_FORMED))
        pairs = featurize_samples(result.samples)
        assert len(pairs) == 3
        assert pairs[0][0].n_atoms == 3   # CCO
        assert pairs[0][1].n_atoms == 2   # CN
