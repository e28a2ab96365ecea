import pytest

from mtjsim import CONSTANTS, ConfigurationError, RunConfig, parse_config


class TestDefaults:
    def test_empty_input_gives_table_defaults(self):
        cfg = parse_config("")
        assert cfg == RunConfig()
        assert cfg.saturation_magnetization_kA_per_m == 1000.0
        assert cfg.gilbert_damping == 0.0122
        assert cfg.spin_polarization == 0.5
        assert cfg.energy_barrier_kT == 31.44
        assert cfg.conductance_p_mS == 1.0
        assert cfg.conductance_ap_mS == 0.5
        assert cfg.pulse_amplitude_uA == 100.0
        assert cfg.pulse_width_ns == 1.0
        assert cfg.temperature_K == 300.0

    def test_device_factory_si_values(self):
        dev = parse_config("").device()
        assert dev.m_s == 1.0e6
        assert dev.axis_a == pytest.approx(40e-9)
        assert dev.e_b == pytest.approx(31.44 * CONSTANTS.k_b * 300.0, rel=1e-12)
        assert dev.g_p == pytest.approx(1e-3)

    def test_train_factory(self):
        train = parse_config("interval_ns = 3\n").train()
        assert train.interval == pytest.approx(3e-9)
        assert train.amplitude == pytest.approx(100e-6)
        assert train.count == 10

    def test_demag_factory_default_isotropic(self):
        cfg = parse_config("")
        n = cfg.demag()
        assert n.n_x == n.n_y == n.n_z == pytest.approx(1 / 3)

    def test_demag_factory_computed_when_enabled(self):
        cfg = parse_config("include_demag = true\n")
        n = cfg.demag()
        assert n.n_z == pytest.approx(0.9004, abs=1e-3)


class TestParsing:
    def test_file_values_override_defaults(self):
        cfg = parse_config("interval_ns = 3\ntrials = 7\n")
        assert cfg.interval_ns == 3.0
        assert cfg.trials == 7

    def test_flags_override_file(self):
        cfg = parse_config("interval_ns = 3\n", {"interval_ns": 4.5})
        assert cfg.interval_ns == 4.5

    def test_unknown_key_in_file(self):
        with pytest.raises(ConfigurationError, match="unknown configuration key: pulse_amp"):
            parse_config("pulse_amp = 1\n")

    def test_unknown_key_in_overrides(self):
        with pytest.raises(ConfigurationError, match="nonsense"):
            parse_config("", {"nonsense": 1})

    def test_unparsable_value_names_key(self):
        with pytest.raises(ConfigurationError, match="trials"):
            parse_config("trials = many\n")

    def test_malformed_line(self):
        with pytest.raises(ConfigurationError, match="line 1"):
            parse_config("just some words\n")

    def test_comments_and_blanks(self):
        cfg = parse_config("# a comment\n\ninterval_ns = 2  # inline\n")
        assert cfg.interval_ns == 2.0

    def test_bool_and_tuple_values(self):
        cfg = parse_config("include_demag = true\nsweep_intervals_ns = 2,4.5,8\n")
        assert cfg.include_demag is True
        assert cfg.sweep_intervals_ns == (2.0, 4.5, 8.0)

    def test_invariant_violation_names_key(self):
        with pytest.raises(ConfigurationError, match="gilbert_damping"):
            parse_config("gilbert_damping = -1\n")
        with pytest.raises(ConfigurationError, match="conductance"):
            parse_config("conductance_ap_mS = 2\n")
        with pytest.raises(ConfigurationError, match="spin_polarization"):
            parse_config("spin_polarization = 0\n")
        with pytest.raises(ConfigurationError, match="sample_every_ps"):
            parse_config("sample_every_ps = 0.5\n")


class TestRoundTrip:
    def test_default_round_trip_is_bit_exact(self):
        cfg = parse_config("")
        assert parse_config(cfg.dump()) == cfg

    def test_round_trip_with_awkward_floats(self):
        cfg = parse_config("", {"interval_ns": 0.30000000000000004,
                                "gilbert_damping": "1e-3",
                                "sweep_intervals_ns": "2.1,3.3"})
        again = parse_config(cfg.dump())
        assert again == cfg
        assert again.interval_ns == 0.30000000000000004

    def test_dump_is_flat_key_value(self):
        for line in parse_config("").dump().strip().splitlines():
            key, sep, val = line.partition(" = ")
            assert sep == " = "
            assert key.isidentifier()
