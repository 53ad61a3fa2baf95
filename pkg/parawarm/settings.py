"""
Django settings for the parawarm project.

The project has no web surface: Django provides the settings layer, the
management-command CLI and the test runner around the warmstart engine in
``core.engine``.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Not used for signing anything; Django still expects a value.
SECRET_KEY = os.environ.get('SECRET_KEY', 'parawarm-insecure-local-key')

DEBUG = os.environ.get('DEBUG', 'False').lower() in ('true', '1', 't')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'core',  # Warmstart engine, reporting and management commands
]

# No persistence: every run reads a problem file and writes tables.
DATABASES = {}

USE_I18N = False

USE_TZ = True


# Logging
# Diagnostics go to stderr so data written to stdout stays machine readable.

LOG_LEVEL = os.environ.get('PARAWARM_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['stderr'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Warmstart engine configuration
# Every value can be overridden from the environment (or a .env file).

def _env_float(name, default):
    value = os.environ.get(name)
    return float(value) if value not in (None, '') else default


# Worker cap for parallel lambda sweeps; 0 means "use available parallelism"
PARAWARM_THREADS = int(os.environ.get('PARAWARM_THREADS', '0') or 0)

# Seed for the random border of the tweaked eigendecomposition
PARAWARM_SEED = int(os.environ.get('PARAWARM_SEED', '0') or 0)

PARAWARM_TOLERANCES = {
    'res': _env_float('PARAWARM_TOL_RES', 1e-9),
    'feas': _env_float('PARAWARM_TOL_FEAS', 1e-9),
    'opt': _env_float('PARAWARM_TOL_OPT', 1e-9),
    'imag': _env_float('PARAWARM_TOL_IMAG', 1e-7),
    'sing': _env_float('PARAWARM_TOL_SING', 1e-12),
    'recon': _env_float('PARAWARM_TOL_RECON', 1e-8),
    'cond_threshold': _env_float('PARAWARM_COND_THRESHOLD', 1e12),
    'lambda0': _env_float('PARAWARM_TOL_LAMBDA0', 1e-14),
    'exclusion_radius': _env_float('PARAWARM_EXCLUSION_RADIUS', 1e-6),
}
