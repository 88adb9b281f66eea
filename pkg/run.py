"""
MUBTRIO - Run the command-line tool
"""
from app.main import main

if __name__ == "__main__":
    main()
