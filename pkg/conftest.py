"""Configure Django before pytest collects the hklab test modules."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'gaugekit.settings')
django.setup()
