import json

import numpy as np
import pytest

from cfverify.cf import AnalyticCF
from cfverify.errors import DimensionChainError, ParseError, RangeError, SchemaError
from cfverify.model_io import (
    DEFAULT_NUMERICS,
    config_from_dict,
    load_config,
    load_network,
    network_from_dict,
    network_to_dict,
    random_network,
    save_network,
)
from cfverify.verification import VerificationProblem

from conftest import CONFIGS


def base_record(**changes):
    rec = {
        "network": {"layers": [{"weights": [[1.0, 2.0]], "bias": [0.5]}]},
        "inputs": [{"kind": "cauchy", "location": 0, "scale": 1},
                   {"kind": "gaussian", "mean": 0, "variance": 1}],
        "safety": {"c": [1.0], "d": 0.0, "direction": "LE"},
        "risk": 0.1,
    }
    rec.update(changes)
    return rec


class TestNetworkFiles:
    def test_round_trip_byte_identical(self, tmp_path):
        net = random_network((2, 4, 3, 1), 5)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_network(net, a)
        save_network(load_network(a), b)
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().endswith("\n")

    def test_load_values(self, tmp_path):
        net = random_network((2, 3, 1), 1)
        path = tmp_path / "n.json"
        save_network(net, path)
        back = load_network(path)
        for l0, l1 in zip(net.layers, back.layers):
            np.testing.assert_array_equal(l0.weights, l1.weights)
            np.testing.assert_array_equal(l0.bias, l1.bias)

    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_network(path)

    def test_dimension_chain(self):
        data = {"layers": [{"weights": [[1, 2]], "bias": [0]}, {"weights": [[1, 2]], "bias": [0]}]}
        with pytest.raises(DimensionChainError) as info:
            network_from_dict(data)
        assert info.value.layer == 1

    def test_bias_shape(self):
        with pytest.raises(DimensionChainError):
            network_from_dict({"layers": [{"weights": [[1, 2]], "bias": [0, 1]}]})

    def test_missing_fields(self):
        with pytest.raises(SchemaError):
            network_from_dict({"layers": [{"weights": [[1]]}]})
        with pytest.raises(SchemaError):
            network_from_dict({"layers": []})

    def test_random_network(self):
        net = random_network((2, 10, 1), 0)
        assert net.widths == (2, 10, 1)
        w = np.concatenate([l.weights.ravel() for l in net.layers])
        assert np.all(np.abs(w) <= 1)
        d = network_to_dict(random_network((2, 10, 1), 0))
        assert d == network_to_dict(net)


class TestConfig:
    def test_defaults(self):
        cfg = config_from_dict(base_record())
        assert cfg.numerics == DEFAULT_NUMERICS
        assert cfg.mc_samples == 10_000 and cfg.seed == 0
        assert cfg.inputs == (AnalyticCF.cauchy(0, 1), AnalyticCF.gaussian(0, 1))
        assert isinstance(cfg.to_problem(), VerificationProblem)
        assert cfg.grid.n_points == 10001 and cfg.hilbert.h == 0.05

    def test_overrides(self):
        cfg = config_from_dict(base_record()).with_overrides(ht_step=0.5, risk=0.2, seed=None)
        assert cfg.hilbert.h == 0.5 and cfg.risk == 0.2 and cfg.seed == 0
        assert cfg.echo()["ht_step"] == 0.5
        with pytest.raises(RangeError):
            cfg.with_overrides(ht_terms=-1)

    @pytest.mark.parametrize(
        "changes,error",
        [
            ({"risk": 1.5}, RangeError),
            ({"risk": 0}, RangeError),
            ({"risk": "high"}, SchemaError),
            ({"inputs": [{"kind": "cauchy", "location": 0, "scale": 1}]}, DimensionChainError),
            ({"inputs": [{"kind": "cauchy", "location": 0, "scale": -1}] * 2}, SchemaError),
            ({"safety": {"c": [1.0, 1.0]}}, DimensionChainError),
            ({"safety": {"c": [0.0]}}, RangeError),
            ({"safety": {"c": [1.0], "direction": "NE"}}, SchemaError),
            ({"safety": []}, SchemaError),
            ({"numerics": {"ht_step": 0}}, RangeError),
            ({"numerics": {"n_grid": 100.5}}, RangeError),
            ({"numerics": {"bogus": 1}}, SchemaError),
            ({"seed": 1.5}, SchemaError),
            ({"network": {"random": {"widths": [2]}}}, SchemaError),
            ({"network": {"random": {"widths": [2], "seed": 0}}}, RangeError),
        ],
    )
    def test_validation(self, changes, error):
        with pytest.raises(error):
            config_from_dict(base_record(**changes))

    def test_missing_required(self):
        rec = base_record()
        del rec["risk"]
        with pytest.raises(SchemaError):
            config_from_dict(rec)

    def test_shipped_configs(self):
        cfg = load_config(CONFIGS / "cauchy_2x10x1.json")
        assert cfg.network.widths == (2, 10, 1)
        assert cfg.network_source == {"random": {"widths": [2, 10, 1], "seed": 0}}
        cfg = load_config(CONFIGS / "identity_cauchy.json")
        assert cfg.network.widths == (1, 1)
        cfg = load_config(CONFIGS / "gaussian_deep.json")
        assert cfg.network.widths == (2, 50, 50, 50, 50, 50, 2)

    def test_relative_network_path(self, tmp_path):
        save_network(random_network((2, 1), 0), tmp_path / "net.json")
        (tmp_path / "p.json").write_text(json.dumps(base_record(network="net.json")))
        assert load_config(tmp_path / "p.json").network_source == {"file": "net.json"}
