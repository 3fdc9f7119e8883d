"""
Django settings for gaugekit project.

The project has no HTTP surface; Django provides the settings layer, the
management-command CLI and the test runner.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-gaugekit-local-only-7v2q9x'
)

DEBUG = os.environ.get('DJANGO_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'hklab',
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

#The laboratory stores nothing; the database is only there for Django itself
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'hklab': {
            'handlers': ['console'],
            'level': os.environ.get('GAUGEKIT_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Laboratory tunables, read through hklab.conf.lab_setting

GAUGEKIT = {
    #Bisection depth cap of the Cousin partition builder
    'DEPTH_CAP': int(os.environ.get('GAUGEKIT_DEPTH_CAP', 64)),
    #Depth cap of exact set descent (membership, distance, tag oracles)
    'DISTANCE_DEPTH_CAP': 200,
    #Working precision in bits of inexact catalog functions
    'PRECISION_BITS': 96,
    #Randomized bisection may split voluntarily above this depth
    'RANDOM_SPLIT_DEPTH': 3,
    'REPORT_DIR': os.environ.get('GAUGEKIT_REPORT_DIR', str(BASE_DIR / 'reports')),
    'SCHEMA': 'gaugekit/1',
}
