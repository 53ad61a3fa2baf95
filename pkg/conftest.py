"""Configure Django for pytest, mirroring manage.py."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'parawarm.settings')
django.setup()
