from rmatrix_geometry.cli import parse_args
from rmatrix_geometry.core.errors import ConfigError
from rmatrix_geometry.core.io.load_config import RunConfig, load_config


def _expect(code, path=None, overrides=None):
    try:
        load_config(path, overrides)
        assert False, f"expected ConfigError {code}"
    except ConfigError as e:
        assert e.code == code, str(e)
        return e


def test_defaults():
    config = load_config()
    assert config == RunConfig()
    assert config.q == 2 and config.g == 0.6 and config.u is None
    assert config.checks == ("all",)
    mp = config.params()
    assert mp.precision_bits == 53


def test_load_kv_file():
    config = load_config("configs/default.cfg")
    assert config.q_re == 2.0
    assert config.g_re == 0.6
    assert config.trials is None
    assert config.checks == ("all",)


def test_load_yaml_file():
    config = load_config("configs/complex-coupling.yaml")
    assert config.q == complex(1.5, 0.2)
    assert config.precision == 128
    assert config.checks == ("ybe", "identities", "maps")
    assert config.params().precision_bits == 128


def test_load_json_file():
    config = load_config("configs/u-coupling-eps-minus.json")
    assert config.u == 1.0
    assert config.epsilon == -1
    assert config.checks == ("degenerations",)


def test_command_line_overrides_file():
    config = load_config("configs/complex-coupling.yaml", {"seed": 7, "trials": None})
    assert config.seed == 7
    assert config.trials == 5


def test_unknown_key(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("q_re: 2\ncoupling: 3\n", encoding="utf-8")
    e = _expect("E_CONFIG_UNKNOWN_KEY", str(p))
    assert e.path == "coupling"


def test_u_and_g_are_exclusive():
    _expect("E_CONFIG_EXCLUSIVE", overrides={"u_re": 1.0, "g_re": 0.5})


def test_bad_values():
    _expect("E_CONFIG_VALUE", overrides={"precision": 100})
    _expect("E_CONFIG_VALUE", overrides={"seed": -1})
    _expect("E_CONFIG_VALUE", overrides={"seed": 2**64})
    _expect("E_CONFIG_VALUE", overrides={"epsilon": 0})
    _expect("E_CONFIG_VALUE", overrides={"trials": 0})
    _expect("E_CONFIG_VALUE", overrides={"tol": -1.0})
    _expect("E_CONFIG_VALUE", overrides={"trials": "many"})
    _expect("E_CONFIG_UNKNOWN_CHECK", overrides={"checks": ["ybe", "everything"]})


def test_epsilon_accepts_signed_text(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("epsilon = +1\n", encoding="utf-8")
    assert load_config(str(p)).epsilon == 1


def test_kv_parse_error_names_the_line(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nseed = 3\nnot a pair\n", encoding="utf-8")
    e = _expect("E_CONFIG_PARSE", str(p))
    assert e.path == "line 3"


def test_file_errors(tmp_path):
    _expect("E_FILE_NOT_FOUND", str(tmp_path / "missing.yaml"))
    p = tmp_path / "run.toml"
    p.write_text("seed = 1\n", encoding="utf-8")
    _expect("E_UNSUPPORTED_FORMAT", str(p))
    p = tmp_path / "run.yaml"
    p.write_text("- 1\n- 2\n", encoding="utf-8")
    _expect("E_INVALID_TOP_LEVEL", str(p))
    p = tmp_path / "run.json"
    p.write_text("{", encoding="utf-8")
    _expect("E_JSON_PARSE", str(p))


def test_excluded_coupling_is_a_config_error():
    config = load_config(overrides={"q_re": 1.0})
    try:
        config.params()
        assert False, "expected ConfigError"
    except ConfigError as e:
        assert e.code == "E_MODEL_Q_EXCLUDED"
        assert e.source == "config"


def test_flags_rebuild_the_config():
    config = RunConfig(
        q_re=1.5,
        q_im=0.2,
        g_re=1 / 3,
        g_im=1 / 7,
        precision=128,
        tol=1e-12,
        seed=42,
        trials=3,
        epsilon=-1,
        checks=("ybe", "maps"),
        json=True,
    )
    assert parse_args(config.to_argv()) == config
    by_u = RunConfig(u_re=0.25, u_im=-0.5, checks=("all",))
    assert parse_args(by_u.to_argv()) == by_u


def test_parse_args_wants_verify():
    try:
        parse_args(["sample", "e1"])
        assert False, "expected ConfigError"
    except ConfigError as e:
        assert e.code == "E_CLI_USAGE"
