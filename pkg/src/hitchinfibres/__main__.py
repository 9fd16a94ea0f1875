from .cli import hitchinfibres


main = hitchinfibres.console_script


if __name__ == "__main__":
    main()
