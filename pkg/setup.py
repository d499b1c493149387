# setup.py
import json
import os
from pathlib import Path

import yaml

from src.utils.config_loader import get_default_config


def create_project_structure():
    """Create the working directories and a default config"""

    directories = [
        'data/zeros',
        'data/relations',
        'outputs',
        'logs',
        'config',
    ]

    for directory in directories:
        os.makedirs(directory, exist_ok=True)
        print(f"✅ Created: {directory}")

    for init_file in ['src/__init__.py', 'tests/__init__.py']:
        Path(init_file).touch()

    config_path = 'config/config.yaml'
    if not os.path.exists(config_path):
        with open(config_path, 'w') as f:
            yaml.dump(get_default_config(), f, default_flow_style=False, sort_keys=False)
        print(f"✅ Created: {config_path}")
    else:
        print(f"↪ Kept existing {config_path}")

    examples = {
        'data/relations/example_1.json': {
            "n": 2,
            "rows": [{"b": [1, 1], "a": 1, "q": 1, "p": 2}, {"b": [1, -1], "a": 1, "q": 2, "p": 3}],
        },
        'data/relations/example_2.json': {
            "n": 2,
            "rows": [{"b": [2, 1], "a": 1, "q": 1, "p": 5}, {"b": [2, 3], "a": 1, "q": 1, "p": 7}],
        },
        'data/relations/h_cosine.json': [{"m": [1, 1], "re": 0.5, "im": 0.0}],
    }
    for path, payload in examples.items():
        if not os.path.exists(path):
            with open(path, 'w') as f:
                json.dump(payload, f, indent=2, sort_keys=True)
            print(f"✅ Created: {path}")

    print("\n🎉 Project structure ready!")
    print("\nNext steps:")
    print("1. Put a table of zeros (one height per line) under data/zeros/")
    print("2. python run_cli.py ingest data/zeros/zeros1.txt")
    print("3. python run_cli.py density --relations data/relations/example_1.json")


if __name__ == "__main__":
    create_project_structure()
