class ConfigError(ValueError):
    """Invalid simulation or scenario configuration."""
